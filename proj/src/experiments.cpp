#include "emlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "emlab/exact_sim.hpp"
#include "emlab/replica.hpp"
#include "emlab/rng.hpp"

namespace emlab {

namespace {

std::uint64_t point_stream_id(int size_idx, int grid_idx, int realization) {
    return (static_cast<std::uint64_t>(size_idx) << 40) |
           (static_cast<std::uint64_t>(grid_idx) << 24) |
           static_cast<std::uint64_t>(realization);
}

std::pair<int, int> pick_probe_pair(TopologyKind topology, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> site(0, n - 1);
    int a = site(rng);
    if (topology == TopologyKind::Chain1dPeriodic) return {a, (a + n / 2) % n};
    int b = a;
    while (b == a) b = site(rng);
    return {a, b};
}

double replica_realization(const SweepSpec& spec, int n, int d, const DisorderSpec& disorder,
                           double q_a, std::uint64_t stream_id) {
    auto rng = make_stream(spec.master_seed, stream_id);
    GateSchedule schedule = (spec.topology == TopologyKind::AllToAll)
                                ? build_all_to_all_schedule(n, d, rng)
                                : build_brickwork_schedule(n, d);
    NoiseField field = sample_noise_field(disorder, n, d, rng);
    ReplicaState state = ReplicaState::init_haar_global(n);
    for (int t = 0; t < d; ++t) state.step_layer(schedule.layers[t], field, t, q_a);
    if (spec.probe == Probe::Renyi2Probe) {
        std::uniform_int_distribution<int> site(0, n - 1);
        return state.renyi2_probe(site(rng));
    }
    auto [a, b] = pick_probe_pair(spec.topology, n, rng);
    return state.correlation_metric(a, b);
}

double exact_realization(const SweepSpec& spec, int n, int d, const DisorderSpec& disorder,
                         double q_a, std::uint64_t stream_id) {
    auto rng = make_stream(spec.master_seed, stream_id);
    GateSchedule schedule = (spec.topology == TopologyKind::AllToAll)
                                ? build_all_to_all_schedule(n, d, rng)
                                : build_brickwork_schedule(n, d);
    NoiseField field = sample_noise_field(disorder, n, d, rng);
    DensityMatrix rho = DensityMatrix::haar_random_state(n, rng);
    evolve_circuit(rho, schedule, field, q_a, rng);
    auto [a, b] = pick_probe_pair(spec.topology, n, rng);
    return mutual_information(rho, a, b);
}

}  // namespace

void SweepSpec::validate() const {
    if (sizes.empty() || sigma_over_qbar.empty())
        throw std::invalid_argument("SweepSpec: empty grid");
    if (realizations < 1) throw std::invalid_argument("SweepSpec: realizations must be >= 1");
    if (q_bar <= 0.0 || q_bar >= 1.0) throw std::invalid_argument("SweepSpec: q_bar outside (0,1)");
    if (engine == Engine::Replica && probe == Probe::MutualInformation)
        throw std::invalid_argument("SweepSpec: mutual information needs the exact engine");
    if (engine == Engine::Exact && probe != Probe::MutualInformation)
        throw std::invalid_argument("SweepSpec: exact engine supports the mutual-information probe");
    for (int n : sizes) {
        if (engine == Engine::Exact && n > 12)
            throw std::invalid_argument("SweepSpec: exact engine limited to n <= 12");
        if (engine == Engine::Replica && n > 24)
            throw std::invalid_argument("SweepSpec: replica engine limited to n <= 24");
    }
}

EnsembleResult disorder_average(const std::function<double(int)>& observable, int realizations,
                                int workers) {
    if (realizations < 1) throw std::invalid_argument("disorder_average: realizations must be >= 1");
    std::vector<double> values(realizations);
    workers = std::max(1, workers);
    if (workers == 1) {
        for (int r = 0; r < realizations; ++r) values[r] = observable(r);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int r = w; r < realizations; r += workers) values[r] = observable(r);
            });
        for (auto& t : pool) t.join();
    }
    EnsembleResult result = aggregate(values);
    if (result.count == 0) throw std::runtime_error("disorder_average: all realizations non-finite");
    return result;
}

SweepTable sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    for (std::size_t si = 0; si < spec.sizes.size(); ++si) {
        int n = spec.sizes[si];
        int d = spec.depth_for(n);
        for (std::size_t gi = 0; gi < spec.sigma_over_qbar.size(); ++gi) {
            double ratio = spec.sigma_over_qbar[gi];
            DisorderSpec disorder =
                disorder_from_ratio(spec.p, spec.q_bar, ratio, spec.noise_mode, spec.master_seed);
            double q_a = zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2);
            auto observable = [&, n, d, disorder, q_a, si, gi](int r) {
                std::uint64_t sid = point_stream_id(static_cast<int>(si), static_cast<int>(gi), r);
                return (spec.engine == Engine::Replica)
                           ? replica_realization(spec, n, d, disorder, q_a, sid)
                           : exact_realization(spec, n, d, disorder, q_a, sid);
            };
            SweepRow row;
            row.n = n;
            row.sigma_over_qbar = ratio;
            row.depth = d;
            row.result = disorder_average(observable, spec.realizations, spec.workers);
            table.push_back(row);
        }
    }
    return table;
}

std::vector<Curve> curves_from_table(const SweepTable& table) {
    std::vector<Curve> curves;
    for (const auto& row : table) {
        auto it = std::find_if(curves.begin(), curves.end(),
                               [&](const Curve& c) { return c.n == row.n; });
        if (it == curves.end()) {
            curves.push_back({row.n, {}, {}});
            it = curves.end() - 1;
        }
        it->x.push_back(row.sigma_over_qbar);
        it->y.push_back(row.result.mean);
    }
    return curves;
}

CrossingResult find_crossing(const std::vector<Curve>& curves) {
    if (curves.size() < 2) throw std::invalid_argument("find_crossing: need at least two curves");
    CrossingResult result;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            const Curve& a = curves[i];
            const Curve& b = curves[j];
            std::size_t npts = std::min(a.x.size(), b.x.size());
            for (std::size_t k = 0; k + 1 < npts; ++k) {
                double d0 = a.y[k] - b.y[k];
                double d1 = a.y[k + 1] - b.y[k + 1];
                if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
                if (d0 == 0.0) {
                    result.pairwise.push_back(a.x[k]);
                } else if (d0 * d1 < 0.0) {
                    double frac = d0 / (d0 - d1);
                    result.pairwise.push_back(a.x[k] + frac * (a.x[k + 1] - a.x[k]));
                }
            }
        }
    if (result.pairwise.empty()) return result;
    std::vector<double> sorted = result.pairwise;
    std::sort(sorted.begin(), sorted.end());
    std::size_t m = sorted.size();
    result.sigma_c = (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    result.spread = 0.5 * (sorted.back() - sorted.front());
    result.found = true;
    return result;
}

CollapseResult scaling_collapse(const std::vector<Curve>& curves, const CollapseSpec& spec) {
    if (spec.mu <= 0.0) throw std::invalid_argument("scaling_collapse: mu must be positive");
    CollapseResult result;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const Curve& c : curves) {
        Curve scaled;
        scaled.n = c.n;
        double xf = std::pow(static_cast<double>(c.n), spec.mu);
        double yf = spec.y_exponent ? std::pow(static_cast<double>(c.n), *spec.y_exponent) : 1.0;
        for (std::size_t k = 0; k < c.x.size(); ++k) {
            if (!std::isfinite(c.y[k])) continue;
            scaled.x.push_back((c.x[k] - spec.sigma_c) * xf);
            scaled.y.push_back(c.y[k] * yf);
        }
        if (scaled.x.size() < 2) continue;
        lo = std::max(lo, scaled.x.front());
        hi = std::min(hi, scaled.x.back());
        result.collapsed.push_back(std::move(scaled));
    }
    if (result.collapsed.size() < 2 || !(lo < hi)) {
        result.quality = std::numeric_limits<double>::infinity();
        return result;
    }
    constexpr int kGridPoints = 64;
    auto interp = [](const Curve& c, double x) {
        auto it = std::lower_bound(c.x.begin(), c.x.end(), x);
        if (it == c.x.begin()) return c.y.front();
        if (it == c.x.end()) return c.y.back();
        std::size_t k = it - c.x.begin();
        double f = (x - c.x[k - 1]) / (c.x[k] - c.x[k - 1]);
        return c.y[k - 1] + f * (c.y[k] - c.y[k - 1]);
    };
    double quality = 0.0;
    for (int g = 0; g < kGridPoints; ++g) {
        double x = lo + (hi - lo) * g / (kGridPoints - 1);
        double mean = 0.0;
        for (const Curve& c : result.collapsed) mean += interp(c, x);
        mean /= static_cast<double>(result.collapsed.size());
        for (const Curve& c : result.collapsed) {
            double dev = interp(c, x) - mean;
            quality += dev * dev;
        }
    }
    result.quality = quality;
    return result;
}

std::vector<CollapseScanCell> collapse_scan(const std::vector<Curve>& curves,
                                            const std::vector<double>& sigma_c_grid,
                                            const std::vector<double>& mu_grid) {
    std::vector<CollapseScanCell> cells;
    for (double sc : sigma_c_grid)
        for (double mu : mu_grid) {
            CollapseSpec spec;
            spec.sigma_c = sc;
            spec.mu = mu;
            cells.push_back({sc, mu, scaling_collapse(curves, spec).quality});
        }
    return cells;
}

PeakLocation find_peak(const Curve& curve) {
    if (curve.x.empty()) throw std::invalid_argument("find_peak: empty curve");
    std::size_t best = 0;
    for (std::size_t k = 1; k < curve.x.size(); ++k)
        if (curve.y[k] > curve.y[best]) best = k;
    return {curve.x[best], curve.y[best], best > 0 && best + 1 < curve.x.size()};
}

GrowthFit instability_experiment(int n, const DisorderSpec& disorder, int d_max, SimpleForm form,
                                 std::uint64_t master_seed, int realization) {
    if (disorder.mode != NoiseMode::Quenched)
        throw std::invalid_argument("instability_experiment: needs quenched disorder");
    auto rng = make_stream(master_seed, static_cast<std::uint64_t>(realization));
    NoiseField field = sample_noise_field(disorder, n, d_max, rng);
    // longest circular run of q1 sites
    std::vector<char> low(n);
    int n_low = 0;
    for (int x = 0; x < n; ++x) {
        low[x] = field.rate(x, 0) <= disorder.q1 + 1e-15;
        n_low += low[x];
    }
    if (n_low == 0) throw std::runtime_error("instability_experiment: no q1 sites in realization");
    Region region;
    if (n_low == n) {
        for (int x = 0; x < n; ++x) region.sites.push_back(x);
    } else {
        int best_len = 0, best_start = 0;
        for (int start = 0; start < n; ++start) {
            if (!low[start]) continue;
            int len = 0;
            while (len < n && low[(start + len) % n]) ++len;
            if (len > best_len) {
                best_len = len;
                best_start = start;
            }
        }
        for (int k = 0; k < best_len; ++k) region.sites.push_back((best_start + k) % n);
    }
    double q_a = zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2);
    GateSchedule schedule = build_brickwork_schedule(n, d_max);
    ReplicaState state = ReplicaState::init_simple(
        n, region,
        form == SimpleForm::ProductOnRegion ? SimpleInitForm::ProductOnRegion
                                            : SimpleInitForm::HaarOnRegion,
        /*signed_mode=*/true);
    std::vector<double> depths, log_trace_plus;
    for (int t = 0; t < d_max; ++t) {
        state.step_layer(schedule.layers[t], field, t, q_a);
        auto [tp, tm] = state.sign_resolved_traces();
        depths.push_back(t + 1.0);
        log_trace_plus.push_back(std::log(tp));
    }
    GrowthFit fit;
    fit.d_min = d_max / 2;
    fit.d_max = d_max;
    fit.region_size = static_cast<int>(region.sites.size());
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < depths.size(); ++k)
        if (depths[k] >= fit.d_min) {
            xs.push_back(depths[k]);
            ys.push_back(log_trace_plus[k]);
        }
    LinearFit lf = fit_line(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r_squared = lf.r_squared;
    return fit;
}

FidelityTable fidelity_scaling(const FidelitySpec& spec) {
    if (spec.sizes.empty() || spec.depths.empty())
        throw std::invalid_argument("fidelity_scaling: empty grid");
    for (int n : spec.sizes)
        if (n > 10) throw std::invalid_argument("fidelity_scaling: exact engine limited to n <= 10");
    FidelityTable table;
    for (std::size_t si = 0; si < spec.sizes.size(); ++si) {
        int n = spec.sizes[si];
        std::vector<double> log_d, log_std_fm, log_std_fxeb;
        for (std::size_t di = 0; di < spec.depths.size(); ++di) {
            int d = spec.depths[di];
            DisorderSpec disorder = disorder_from_ratio(spec.p, spec.q_bar, spec.sigma_over_qbar,
                                                        NoiseMode::Spacetime, spec.master_seed);
            double q_a =
                spec.mitigated ? zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2) : 0.0;
            std::vector<double> log_fm(spec.noise_realizations);
            std::vector<double> log_fxeb(spec.noise_realizations);
            auto one_noise = [&](int nr) {
                std::uint64_t sid = point_stream_id(static_cast<int>(si),
                                                    static_cast<int>(di), nr);
                auto rng = make_stream(spec.master_seed, sid);
                NoiseField field = sample_noise_field(disorder, n, d, rng);
                double sum_fm = 0.0, sum_ratio = 0.0;
                for (int c = 0; c < spec.circuits_per_noise; ++c) {
                    GateSchedule schedule = build_all_to_all_schedule(n, d, rng);
                    GateRecord record = sample_gate_record(schedule, rng);
                    DensityMatrix rho0 = DensityMatrix::zero_state(n);
                    DensityMatrix branch_a = rho0, branch_n = rho0, branch_0 = rho0,
                                  branch_an = rho0;
                    apply_record(branch_a, record, nullptr, q_a, {false, true});
                    apply_record(branch_n, record, &field, q_a, {true, false});
                    apply_record(branch_0, record, nullptr, q_a, {false, false});
                    apply_record(branch_an, record, &field, q_a, {true, true});
                    sum_fm += (branch_a.mat * branch_n.mat).trace().real();
                    Eigen::VectorXd p0 = branch_0.mat.diagonal().real();
                    Eigen::VectorXd pan = branch_an.mat.diagonal().real();
                    double fxeb = xeb(p0, pan, n);
                    double ideal = xeb(p0, p0, n);
                    sum_ratio += fxeb / ideal;
                }
                log_fm[nr] = std::log(sum_fm / spec.circuits_per_noise);
                log_fxeb[nr] = std::log(sum_ratio / spec.circuits_per_noise);
            };
            int workers = std::max(1, spec.workers);
            if (workers == 1) {
                for (int nr = 0; nr < spec.noise_realizations; ++nr) one_noise(nr);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        for (int nr = w; nr < spec.noise_realizations; nr += workers) one_noise(nr);
                    });
                for (auto& t : pool) t.join();
            }
            EnsembleResult fm = aggregate(log_fm);
            EnsembleResult fx = aggregate(log_fxeb);
            FidelityRow row;
            row.n = n;
            row.d = d;
            row.mean_neg_log_fm = -fm.mean / n;
            row.std_log_fm = fm.std_dev;
            row.mean_neg_log_fxeb = -fx.mean / n;
            row.std_log_fxeb = fx.std_dev;
            row.count = static_cast<int>(fm.count);
            table.rows.push_back(row);
            if (fm.std_dev > 0.0 && fx.std_dev > 0.0) {
                log_d.push_back(std::log(static_cast<double>(d)));
                log_std_fm.push_back(std::log(fm.std_dev));
                log_std_fxeb.push_back(std::log(fx.std_dev));
            }
        }
        table.beta_fm.push_back(log_d.size() >= 2 ? fit_line(log_d, log_std_fm).slope : 0.0);
        table.beta_fxeb.push_back(log_d.size() >= 2 ? fit_line(log_d, log_std_fxeb).slope : 0.0);
    }
    return table;
}

}  // namespace emlab
