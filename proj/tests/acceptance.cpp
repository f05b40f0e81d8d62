// Acceptance gate: one PASS/FAIL line per criterion. Select a subset with
// --criteria 1,2,5; exit status is the number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "emlab/circuit_model.hpp"
#include "emlab/config.hpp"
#include "emlab/exact_sim.hpp"
#include "emlab/experiments.hpp"
#include "emlab/meanfield.hpp"
#include "emlab/replica.hpp"
#include "emlab/rng.hpp"

using namespace emlab;

namespace {

// Calibrated mean depolarizing rate placing the all-to-all crossing near
// sigma_c / q_bar = 0.65 (binary disorder at p = 1/2, d = N).
constexpr double kQbar = 0.21;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [FAILED: " << what << "]";
        }
    }
};

NoiseField uniform_field(int n, int d, double q) {
    NoiseField f;
    f.n_qubits = n;
    f.depth = d;
    f.rates.assign(static_cast<std::size_t>(n) * d, q);
    return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---------------------------------------------------------------- criterion 1
Check channel_inverse_identity() {
    Check c;
    double worst_replica = 0.0, worst_exact = 0.0;
    auto rng = make_stream(101, 0);
    for (double q : {0.0, 0.05, 0.1, 0.3}) {
        // replica weights: evolve a product state through a few random layers
        // so the probe state is generic
        ReplicaState st = ReplicaState::init_product_state(4);
        GateSchedule warm = build_brickwork_schedule(4, 3);
        NoiseField field = uniform_field(4, 3, 0.1);
        for (int t = 0; t < 3; ++t) st.step_layer(warm.layers[t], field, t, 0.0);
        std::vector<double> before = st.weights();
        for (int x = 0; x < 4; ++x) {
            st.apply_noise(x, q);
            st.apply_antinoise(x, q);
        }
        worst_replica = std::max(worst_replica, max_abs_diff(before, st.weights()));

        DensityMatrix rho = DensityMatrix::haar_random_state(3, rng);
        DensityMatrix copy = rho;
        for (int x = 0; x < 3; ++x) {
            apply_depolarizing(copy, x, q);
            apply_antinoise_map(copy, x, q);
        }
        worst_exact = std::max(worst_exact, (copy.mat - rho.mat).cwiseAbs().maxCoeff());
    }
    c.detail << "max deviation replica " << worst_replica << ", exact " << worst_exact;
    c.require(worst_replica <= 1e-12, "replica inverse identity above 1e-12");
    c.require(worst_exact <= 1e-12, "exact inverse identity above 1e-12");
    return c;
}

// ---------------------------------------------------------------- criterion 2
Check trace_conservation() {
    Check c;
    auto rng = make_stream(102, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int configs = 0;
    auto random_disorder = [&](std::uint64_t seed) {
        double q1 = 0.3 * u(rng);
        double q2 = q1 + (0.6 - q1) * u(rng);
        NoiseMode mode = u(rng) < 0.5 ? NoiseMode::Spacetime : NoiseMode::Quenched;
        return DisorderSpec{0.1 + 0.8 * u(rng), q1, q2, mode, seed};
    };
    for (int k = 0; k < 60; ++k) {  // replica engine
        int n = 2 * (1 + static_cast<int>(5 * u(rng)) % 5);  // 2..10 even
        int d = 1 + static_cast<int>(6 * u(rng));
        DisorderSpec disorder = random_disorder(1000 + k);
        NoiseField field = sample_noise_field(disorder, n, d);
        double q_a = zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2);
        GateSchedule schedule = build_brickwork_schedule(n, d);
        bool signed_mode = u(rng) < 0.5;
        ReplicaState st = (k % 3 == 0) ? ReplicaState::init_haar_global(n, signed_mode)
                          : (k % 3 == 1)
                              ? ReplicaState::init_product_state(n, signed_mode)
                              : ReplicaState::init_simple(n, Region{{0, 1}},
                                                          SimpleInitForm::HaarOnRegion,
                                                          signed_mode);
        for (int t = 0; t < d; ++t) {
            st.step_layer(schedule.layers[t], field, t, q_a);
            worst = std::max(worst, std::abs(st.trace() - 1.0));
        }
        ++configs;
    }
    for (int k = 0; k < 60; ++k) {  // exact engine
        int n = 2 + static_cast<int>(4 * u(rng)) % 4;  // 2..5
        int d = 1 + static_cast<int>(6 * u(rng));
        DisorderSpec disorder = random_disorder(2000 + k);
        NoiseField field = sample_noise_field(disorder, n, d);
        double q_a = zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2);
        GateSchedule schedule = build_brickwork_schedule(2 * ((n + 1) / 2), d);
        n = schedule.n_qubits;
        field = sample_noise_field(disorder, n, d);
        DensityMatrix rho = (k % 2 == 0) ? DensityMatrix::zero_state(n)
                                         : DensityMatrix::haar_random_state(n, rng);
        GateRecord record = sample_gate_record(schedule, rng);
        for (int t = 0; t < d; ++t) {
            for (const auto& [pair, gate] : record.layers[t])
                apply_2q_unitary(rho, gate, pair.first, pair.second);
            for (int x = 0; x < n; ++x) {
                apply_depolarizing(rho, x, field.rate(x, t));
                apply_antinoise_map(rho, x, q_a);
            }
            worst = std::max(worst, std::abs(rho.trace_real() - 1.0));
        }
        ++configs;
    }
    c.detail << configs << " fuzz configs, worst |Tr - 1| = " << worst;
    c.require(configs >= 100, "fewer than 100 fuzz configs");
    c.require(worst < 1e-9, "trace drift above 1e-9");
    return c;
}

// ---------------------------------------------------------------- criterion 3
Check replica_vs_exact_oracle() {
    Check c;
    const int n = 4, d = 4, kRealizations = 10000;
    DisorderSpec disorder{0.5, 0.05, 0.25, NoiseMode::Spacetime, 77};
    NoiseField field = sample_noise_field(disorder, n, d);
    double q_a = zero_mean_field_rate(disorder.p, disorder.q1, disorder.q2);
    GateSchedule schedule = build_brickwork_schedule(n, d);

    ReplicaState st = ReplicaState::init_haar_global(n);
    for (int t = 0; t < d; ++t) st.step_layer(schedule.layers[t], field, t, q_a);

    std::vector<Region> regions = {{{0}}, {{1}}, {{2}}, {{3}},
                                   {{0, 1}}, {{1, 2}}, {{2, 3}}, {{3, 0}}};
    std::vector<std::vector<double>> samples(regions.size());
    auto rng = make_stream(103, 0);
    for (int r = 0; r < kRealizations; ++r) {
        DensityMatrix rho = DensityMatrix::haar_random_state(n, rng);
        evolve_circuit(rho, schedule, field, q_a, rng);
        for (std::size_t g = 0; g < regions.size(); ++g) {
            Eigen::MatrixXcd red = reduced_density(rho, regions[g].sites);
            samples[g].push_back((red * red).trace().real());
        }
    }
    double worst_sigmas = 0.0;
    for (std::size_t g = 0; g < regions.size(); ++g) {
        EnsembleResult mc = aggregate(samples[g]);
        double predicted = st.avg_purity(regions[g]);
        double pull = std::abs(mc.mean - predicted) / mc.std_err;
        worst_sigmas = std::max(worst_sigmas, pull);
    }
    c.detail << regions.size() << " regions, worst pull " << worst_sigmas << " SE over "
             << kRealizations << " realizations";
    c.require(worst_sigmas < 3.0, "replica prediction outside 3 SE of Monte Carlo");
    return c;
}

// ---------------------------------------------------------------- criterion 4
Check haar_purity_closed_form() {
    Check c;
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
        ReplicaState st = ReplicaState::init_haar_global(n);
        double dim = std::ldexp(1.0, n);
        for (int k = 0; k <= n; ++k) {
            std::uint32_t mask = (k == 0) ? 0u : ((1u << k) - 1u);
            double expected = (std::ldexp(1.0, k) + std::ldexp(1.0, n - k)) / (dim + 1.0);
            worst = std::max(worst, std::abs(st.avg_purity_mask(mask) - expected));
        }
    }
    c.detail << "max closed-form deviation " << worst << " over n <= 10, all k";
    c.require(worst <= 1e-12, "Haar purity deviates from closed form");
    return c;
}

// ---------------------------------------------------------------- criterion 5
Check meanfield_threshold() {
    Check c;
    double worst_rel = 0.0, worst_eig = 0.0;
    for (double j : {0.5, 1.0, 2.0}) {
        double thr = stability_threshold(j);
        worst_rel = std::max(worst_rel, std::abs(thr - 3.0 * j) / (3.0 * j));
        for (double d1 : {0.5, 1.0, 2.0, 3.0}) {
            MeanFieldParams params =
                MeanFieldParams::zero_mean_field(j, 0.0, 2.0 * d1, 0.5, 1);
            auto [l1, l2] = linear_stability(0.0, 0.0, params);
            worst_eig = std::max(worst_eig, std::abs(l1.real() - (-12.0 * j + 4.0 * d1)));
            worst_eig = std::max(worst_eig, std::abs(l2.real() - (-12.0 * j - 4.0 * d1)));
            worst_eig = std::max(worst_eig, std::abs(l1.imag()));
            worst_eig = std::max(worst_eig, std::abs(l2.imag()));
        }
    }
    c.detail << "threshold rel err " << worst_rel << ", origin eigenvalue err " << worst_eig;
    c.require(worst_rel <= 1e-6, "threshold not 3J to 1e-6");
    c.require(worst_eig <= 1e-6, "origin eigenvalues not -12J +/- 4|Delta1|");
    return c;
}

// ---------------------------------------------------------------- criterion 6
Check all_to_all_crossing() {
    Check c;
    SweepSpec spec;
    spec.engine = Engine::Replica;
    spec.topology = TopologyKind::AllToAll;
    spec.probe = Probe::Renyi2Probe;
    spec.sizes = {8, 12, 16, 20};
    spec.depth = 0;  // d = N
    for (int k = 7; k <= 19; ++k) spec.sigma_over_qbar.push_back(0.05 * k);
    spec.q_bar = kQbar;
    spec.realizations = 200;
    spec.master_seed = 106;
    SweepTable table = sweep(spec);
    auto curves = curves_from_table(table);
    CrossingResult cr = find_crossing(curves);
    c.require(cr.found, "no crossing found");
    if (cr.found) {
        c.detail << "sigma_c/q_bar = " << cr.sigma_c << " (spread " << cr.spread << ")";
        c.require(std::abs(cr.sigma_c - 0.65) <= 0.10, "crossing outside 0.65 +/- 0.10");
    }
    std::vector<double> sc_grid, mu_grid;
    for (int k = 9; k <= 18; ++k) sc_grid.push_back(0.05 * k);
    for (int m = 1; m <= 9; ++m) mu_grid.push_back(0.2 * m);
    auto cells = collapse_scan(curves, sc_grid, mu_grid);
    auto best = cells[0];
    for (const auto& cell : cells)
        if (cell.quality < best.quality) best = cell;
    c.detail << "; collapse minimum at (sigma_c=" << best.sigma_c << ", mu=" << best.mu << ")";
    c.require(std::abs(best.sigma_c - 0.65) <= 0.05 + 1e-9,
              "collapse sigma_c not in the cell containing 0.65");
    c.require(std::abs(best.mu - 1.0) <= 0.2 + 1e-9,
              "collapse mu not in the cell containing 1.0");
    return c;
}

// ---------------------------------------------------------------- criterion 7
Check exact_sim_peak() {
    Check c;
    SweepSpec spec;
    spec.engine = Engine::Exact;
    spec.topology = TopologyKind::AllToAll;
    spec.probe = Probe::MutualInformation;
    spec.sizes = {6, 8, 10};
    spec.depth = 0;
    for (int k = 2; k <= 10; ++k) spec.sigma_over_qbar.push_back(0.1 * k);
    // slightly stronger mean rate than the replica sweeps: at these small
    // sizes it moves the finite-size peak into the interior of the grid
    spec.q_bar = 0.3;
    spec.realizations = 150;
    spec.master_seed = 107;
    SweepTable table = sweep(spec);
    for (const auto& curve : curves_from_table(table)) {
        PeakLocation peak = find_peak(curve);
        c.detail << "N=" << curve.n << " peak at " << peak.x << (peak.interior ? "" : " (edge)")
                 << "; ";
        c.require(peak.interior, "peak sits on the grid edge");
        if (curve.n == 10)
            c.require(std::abs(peak.x - 0.55) <= 0.15, "largest-size peak outside 0.55 +/- 0.15");
    }
    return c;
}

// ---------------------------------------------------------------- criterion 8
Check quenched_instability() {
    Check c;
    const int kRealizations = 12;
    std::vector<int> sizes = {12, 16, 20};
    std::vector<double> mean_slopes;
    for (int n : sizes) {
        std::vector<double> slopes, r2s;
        for (int r = 0; r < kRealizations; ++r) {
            DisorderSpec disorder{0.5, 0.02, 0.3, NoiseMode::Quenched, 108};
            GrowthFit fit =
                instability_experiment(n, disorder, 2 * n, SimpleForm::ProductOnRegion, 108, r);
            slopes.push_back(fit.slope);
            r2s.push_back(fit.r_squared);
        }
        EnsembleResult s = aggregate(slopes);
        std::sort(r2s.begin(), r2s.end());
        double median_r2 = r2s[r2s.size() / 2];
        mean_slopes.push_back(s.mean);
        c.detail << "N=" << n << " slope " << s.mean << " (r2 med " << median_r2 << "); ";
        c.require(s.mean > 0.0, "mean growth slope not positive");
        c.require(median_r2 > 0.9, "median fit r^2 below 0.9");
    }
    for (std::size_t i = 1; i < mean_slopes.size(); ++i)
        c.require(mean_slopes[i] >= mean_slopes[i - 1] - 1e-12,
                  "mean slope decreases with N");
    // sigma = 0 control: matched antinoise leaves no exponential growth
    DisorderSpec flat{0.5, 0.16, 0.16, NoiseMode::Quenched, 108};
    GrowthFit control = instability_experiment(16, flat, 32, SimpleForm::ProductOnRegion, 108, 0);
    c.detail << "sigma=0 slope " << control.slope;
    c.require(std::abs(control.slope) < 0.02, "sigma = 0 slope not ~0");
    return c;
}

// ---------------------------------------------------------------- criterion 9
Check peak_drift_1d() {
    Check c;
    SweepSpec spec;
    spec.engine = Engine::Replica;
    spec.topology = TopologyKind::Chain1dPeriodic;
    spec.probe = Probe::CorrelationMetric;
    spec.sizes = {8, 12, 16};
    // fixed depth: the antipodal distance then grows relative to the light
    // cone and the apparent critical point drifts upward with N, the
    // finite-size signature of the missing below-threshold phase
    spec.depth = 12;
    spec.noise_mode = NoiseMode::Quenched;
    for (int k = 4; k <= 20; ++k) spec.sigma_over_qbar.push_back(0.05 * k);
    spec.q_bar = kQbar;
    spec.realizations = 300;
    spec.master_seed = 109;
    SweepTable table = sweep(spec);
    std::vector<double> peaks;
    for (const auto& curve : curves_from_table(table)) {
        PeakLocation peak = find_peak(curve);
        peaks.push_back(peak.x);
        c.detail << "N=" << curve.n << " peak at " << peak.x << "; ";
        c.require(peak.interior, "peak not at an interior grid point");
    }
    for (std::size_t i = 1; i < peaks.size(); ++i)
        c.require(peaks[i] > peaks[i - 1], "peak location not strictly increasing in N");
    return c;
}

// --------------------------------------------------------------- criterion 10
Check fidelity_benchmarks() {
    Check c;
    // perfect mitigation: uniform rate matched by the antinoise
    auto rng = make_stream(110, 0);
    GateSchedule schedule = build_brickwork_schedule(4, 4);
    NoiseField field = uniform_field(4, 4, 0.15);
    double worst = 0.0;
    for (int r = 0; r < 3; ++r) {
        double fm = fidelity_F_M(schedule, field, 0.15, DensityMatrix::zero_state(4), rng);
        worst = std::max(worst, std::abs(fm - 1.0));
    }
    c.detail << "|F_M - 1| = " << worst;
    c.require(worst <= 1e-9, "perfect-mitigation F_M deviates from 1");

    // unmitigated decay is linear in depth
    FidelitySpec raw;
    raw.sizes = {6};
    raw.depths = {2, 4, 6, 8, 10, 12};
    raw.sigma_over_qbar = 0.0;
    raw.q_bar = 0.1;
    raw.mitigated = false;
    raw.noise_realizations = 10;
    raw.circuits_per_noise = 3;
    raw.master_seed = 110;
    FidelityTable raw_table = fidelity_scaling(raw);
    std::vector<double> ds, neg_log_f;
    for (const auto& row : raw_table.rows) {
        ds.push_back(row.d);
        neg_log_f.push_back(row.mean_neg_log_fm * row.n);
    }
    LinearFit lin = fit_line(ds, neg_log_f);
    c.detail << "; -log F linear fit r2 " << lin.r_squared;
    c.require(lin.r_squared > 0.95, "unmitigated -log F not linear in d");
    c.require(lin.slope > 0.0, "unmitigated -log F not growing");

    // below threshold the fluctuation exponent is ~1/2
    // a shallow mean rate keeps the fidelities positive across the whole
    // depth range, which the log statistics need
    FidelitySpec mit;
    mit.sizes = {6};
    mit.depths = {8, 16, 32, 64};
    mit.sigma_over_qbar = 0.3;
    mit.q_bar = 0.1;
    mit.mitigated = true;
    mit.noise_realizations = 40;
    mit.circuits_per_noise = 4;
    mit.master_seed = 111;
    FidelityTable mit_table = fidelity_scaling(mit);
    double beta = mit_table.beta_fxeb[0];
    c.detail << "; beta " << beta;
    c.require(std::abs(beta - 0.5) <= 0.2, "fluctuation exponent outside 0.5 +/- 0.2");

    // sample estimator is unbiased at n = 3... use a 4-qubit brickwork slice
    // restricted to n=3? brickwork needs even n, so use an all-to-all pairing
    const int n = 3;
    auto rng2 = make_stream(110, 1);
    GateSchedule sch3;
    sch3.n_qubits = n;
    for (int t = 0; t < 4; ++t)
        sch3.layers.push_back({{t % 2 == 0 ? QubitPair{0, 1} : QubitPair{1, 2}}});
    NoiseField field3 = uniform_field(n, 4, 0.1);
    DensityMatrix rho = DensityMatrix::zero_state(n);
    GateRecord record = sample_gate_record(sch3, rng2);
    DensityMatrix noisy = rho, anti = rho;
    apply_record(noisy, record, &field3, 0.0, {true, false});
    apply_record(anti, record, nullptr, 0.06, {false, true});
    OutcomeDistribution dist = output_distribution(noisy);
    Eigen::VectorXd p_a = anti.mat.diagonal().real();
    double plug_in = xeb(dist.values, p_a, n);
    const int m = 100000;
    auto samples = sample_outcomes(dist, m, rng2);
    double est = estimate_xeb_from_samples(samples, p_a, n);
    std::vector<double> terms(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        terms[i] = std::ldexp(1.0, n) * p_a(static_cast<Eigen::Index>(samples[i]));
    EnsembleResult term_stats = aggregate(terms);
    double pull = std::abs(est - plug_in) / term_stats.std_err;
    c.detail << "; estimator pull " << pull << " SE";
    c.require(pull < 3.0, "sample estimator biased beyond 3 SE");
    return c;
}

// --------------------------------------------------------------- criterion 11
Check product_law() {
    Check c;
    auto rng = make_stream(111, 0);
    std::uniform_real_distribution<double> u(0.0, 0.3);
    Eigen::Matrix2cd plus;
    plus << 0.5, 0.5, 0.5, 0.5;
    DensityMatrix rho0 = DensityMatrix::from_product({plus});
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        std::vector<double> qs(8);
        for (auto& q : qs) q = u(rng);
        double q_a = u(rng);
        double expected = 1.0;
        for (double q : qs) expected *= (1.0 - q) / (1.0 - q_a);
        // pauli_prefactor_check itself enforces the 1e-10 identity and throws
        // on violation
        double ratio = pauli_prefactor_check(qs, q_a, 0, rho0);
        worst = std::max(worst, std::abs(ratio - expected));
    }
    c.detail << "max product-law deviation " << worst;
    c.require(worst <= 1e-10, "product law violated beyond 1e-10");

    // zero-mean-field log-prefactor statistics over binary disorder draws
    const double p = 0.5, q1 = 0.05, q2 = 0.25;
    const double q_a = zero_mean_field_rate(p, q1, q2);
    const double x1 = std::log((1.0 - q1) / (1.0 - q_a));
    const double x2 = std::log((1.0 - q2) / (1.0 - q_a));
    const double var1 = p * x1 * x1 + (1.0 - p) * x2 * x2 -
                        (p * x1 + (1.0 - p) * x2) * (p * x1 + (1.0 - p) * x2);
    const int kDraws = 10000;
    std::bernoulli_distribution pick_q1(p);
    std::vector<double> var_by_depth;
    for (int d : {8, 16}) {
        std::vector<double> log_pref(kDraws);
        for (int r = 0; r < kDraws; ++r) {
            double acc = 0.0;
            for (int t = 0; t < d; ++t) acc += pick_q1(rng) ? x1 : x2;
            log_pref[r] = acc;
        }
        EnsembleResult stats = aggregate(log_pref);
        double pull = std::abs(stats.mean) / stats.std_err;
        double var = stats.std_dev * stats.std_dev;
        var_by_depth.push_back(var);
        c.detail << "; d=" << d << " mean pull " << pull << " SE, var/(d var1) "
                 << var / (d * var1);
        c.require(pull < 3.0, "mean log-prefactor nonzero beyond 3 SE");
        c.require(std::abs(var / (d * var1) - 1.0) < 0.06, "variance not linear in d");
    }
    double ratio = var_by_depth[1] / var_by_depth[0];
    c.require(ratio > 1.85 && ratio < 2.15, "variance ratio between depths not ~2");
    return c;
}

// --------------------------------------------------------------- criterion 12
Check swap_toy() {
    Check c;
    const double ql = 0.05, qr = 0.25;
    const double q_a = 1.0 - std::sqrt((1.0 - ql) * (1.0 - qr));
    const double q[2] = {ql, qr};
    double worst = 0.0;
    for (int d = 2; d <= 20; ++d) {
        SwapToyReport report = swap_toy_model(ql, qr, d);
        for (int s = 0; s < 2; ++s) {
            // all layers but the most recent cancel pairwise: even depth is
            // exactly 1, odd depth keeps the single-layer residual of the
            // site the Pauli last visited
            double expected =
                (d % 2 == 0) ? 1.0 : (1.0 - q[(s + d) % 2]) / (1.0 - q_a);
            worst = std::max(worst, std::abs(report.deviation[d][s] - expected));
        }
    }
    c.detail << "max final-layer residual deviation " << worst << " over d in 2..20";
    c.require(worst <= 1e-10, "deviation not depth-independent final-layer residual");
    return c;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "channel-inverse identity", channel_inverse_identity},
        {2, "trace conservation fuzz", trace_conservation},
        {3, "replica-vs-exact oracle", replica_vs_exact_oracle},
        {4, "Haar purity closed form", haar_purity_closed_form},
        {5, "mean-field threshold", meanfield_threshold},
        {6, "all-to-all crossing", all_to_all_crossing},
        {7, "exact-sim mutual-information peak", exact_sim_peak},
        {8, "quenched-1D instability", quenched_instability},
        {9, "1D peak drift", peak_drift_1d},
        {10, "fidelity benchmarks", fidelity_benchmarks},
        {11, "product law statistics", product_law},
        {12, "SWAP toy model", swap_toy},
    };

    std::set<int> selected;
    for (int a = 1; a < argc; ++a) {
        std::string arg = argv[a];
        if (arg == "--criteria" && a + 1 < argc) {
            std::stringstream ss(argv[++a]);
            std::string tok;
            while (std::getline(ss, tok, ',')) selected.insert(std::stoi(tok));
        } else {
            std::fprintf(stderr, "usage: %s [--criteria 1,2,...]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.id)) continue;
        Check result = criterion.run();
        std::printf("%s criterion %2d (%s): %s\n", result.ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, result.detail.str().c_str());
        std::fflush(stdout);
        if (!result.ok) ++failures;
    }
    return failures;
}
