#include "emlab/exact_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace emlab {

using cd = std::complex<double>;

DensityMatrix DensityMatrix::zero_state(int n) {
    DensityMatrix rho;
    rho.n_qubits = n;
    std::size_t dim = std::size_t{1} << n;
    rho.mat = Eigen::MatrixXcd::Zero(dim, dim);
    rho.mat(0, 0) = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    DensityMatrix rho;
    rho.n_qubits = n;
    std::size_t dim = std::size_t{1} << n;
    rho.mat = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    return rho;
}

DensityMatrix DensityMatrix::haar_random_state(int n, std::mt19937_64& rng) {
    std::size_t dim = std::size_t{1} << n;
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd psi(dim);
    for (std::size_t i = 0; i < dim; ++i) psi(i) = cd(g(rng), g(rng));
    psi.normalize();
    DensityMatrix rho;
    rho.n_qubits = n;
    rho.mat = psi * psi.adjoint();
    return rho;
}

DensityMatrix DensityMatrix::from_product(const std::vector<Eigen::Matrix2cd>& sites) {
    DensityMatrix rho;
    rho.n_qubits = static_cast<int>(sites.size());
    std::size_t dim = std::size_t{1} << rho.n_qubits;
    rho.mat.resize(dim, dim);
    // site 0 is the least significant bit of the basis index
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            cd v = 1.0;
            for (int s = 0; s < rho.n_qubits; ++s) v *= sites[s]((r >> s) & 1, (c >> s) & 1);
            rho.mat(r, c) = v;
        }
    return rho;
}

double DensityMatrix::purity() const {
    return (mat * mat).trace().real();
}

Eigen::Matrix4cd sample_haar_2q(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Matrix4cd z;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) z(r, c) = cd(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
    Eigen::Matrix4cd q = qr.householderQ();
    Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 4; ++k) {
        cd d = r(k, k);
        q.col(k) *= d / std::abs(d);
    }
    return q;
}

void apply_2q_unitary(DensityMatrix& rho, const Eigen::Matrix4cd& u, int i, int j) {
    int n = rho.n_qubits;
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw std::out_of_range("apply_2q_unitary: bad pair");
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t bi = std::size_t{1} << i;
    const std::size_t bj = std::size_t{1} << j;
    const std::size_t lo = std::min(bi, bj), hi = std::max(bi, bj);
    // gate index convention: u row/col = 2*b_i + b_j
    const std::array<std::size_t, 4> off = {0, bj, bi, bi | bj};

    // left multiply by U
    for (std::size_t c = 0; c < dim; ++c) {
        cd* col = rho.mat.col(c).data();
        for (std::size_t h = 0; h < dim; h += 2 * hi)
            for (std::size_t m = h; m < h + hi; m += 2 * lo)
                for (std::size_t base = m; base < m + lo; ++base) {
                    Eigen::Vector4cd v(col[base | off[0]], col[base | off[1]],
                                       col[base | off[2]], col[base | off[3]]);
                    Eigen::Vector4cd w = u * v;
                    col[base | off[0]] = w(0);
                    col[base | off[1]] = w(1);
                    col[base | off[2]] = w(2);
                    col[base | off[3]] = w(3);
                }
    }
    // right multiply by U^dagger, combining whole columns at a time:
    // col'(k) = sum_m col(m) (U^dagger)(m, k)
    Eigen::Matrix4cd uc = u.adjoint();
    Eigen::MatrixXcd block(dim, 4);
    for (std::size_t h = 0; h < dim; h += 2 * hi)
        for (std::size_t m = h; m < h + hi; m += 2 * lo)
            for (std::size_t base = m; base < m + lo; ++base) {
                for (int k = 0; k < 4; ++k) block.col(k) = rho.mat.col(base | off[k]);
                for (int k = 0; k < 4; ++k)
                    rho.mat.col(base | off[k]).noalias() = block * uc.col(k);
            }
}

namespace {

// Shared 2x2-block pass over the chosen site's bit on rows and columns.
// f(a, b, c, d) receives the block [[a, b], [c, d]] with the site bit being
// (0,0),(0,1),(1,0),(1,1) and writes results back through the references.
template <typename F>
void site_block_pass(DensityMatrix& rho, int site, F&& f) {
    int n = rho.n_qubits;
    if (site < 0 || site >= n) throw std::out_of_range("channel: bad site");
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t b = std::size_t{1} << site;
    for (std::size_t ch = 0; ch < dim; ch += 2 * b)
        for (std::size_t c = ch; c < ch + b; ++c) {
            cd* col0 = rho.mat.col(c).data();
            cd* col1 = rho.mat.col(c | b).data();
            for (std::size_t rh = 0; rh < dim; rh += 2 * b)
                for (std::size_t r = rh; r < rh + b; ++r)
                    f(col0[r], col1[r], col0[r | b], col1[r | b]);
        }
}

}  // namespace

void apply_depolarizing(DensityMatrix& rho, int site, double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("apply_depolarizing: q outside [0,1]");
    double keep = 1.0 - q;
    site_block_pass(rho, site, [&](cd& a, cd& b, cd& c, cd& d) {
        cd t = 0.5 * q * (a + d);
        a = keep * a + t;
        d = keep * d + t;
        b *= keep;
        c *= keep;
    });
}

void apply_antinoise_map(DensityMatrix& rho, int site, double q_a) {
    if (q_a < 0.0 || q_a >= 1.0) throw std::invalid_argument("apply_antinoise_map: q_a outside [0,1)");
    double inv = 1.0 / (1.0 - q_a);
    site_block_pass(rho, site, [&](cd& a, cd& b, cd& c, cd& d) {
        cd t = 0.5 * q_a * (a + d);
        a = (a - t) * inv;
        d = (d - t) * inv;
        b *= inv;
        c *= inv;
    });
}

GateRecord sample_gate_record(const GateSchedule& schedule, std::mt19937_64& rng) {
    GateRecord record;
    record.n_qubits = schedule.n_qubits;
    record.layers.reserve(schedule.layers.size());
    for (const auto& layer : schedule.layers) {
        std::vector<std::pair<QubitPair, Eigen::Matrix4cd>> gates;
        gates.reserve(layer.size());
        for (const auto& pair : layer) gates.emplace_back(pair, sample_haar_2q(rng));
        record.layers.push_back(std::move(gates));
    }
    return record;
}

void apply_record(DensityMatrix& rho, const GateRecord& record, const NoiseField* field,
                  double q_a, ChannelFlags flags) {
    if (rho.n_qubits != record.n_qubits)
        throw std::invalid_argument("apply_record: dimension mismatch");
    if (flags.noise && field == nullptr)
        throw std::invalid_argument("apply_record: noise requested without a field");
    int n = rho.n_qubits;
    for (int t = 0; t < record.depth(); ++t) {
        for (const auto& [pair, u] : record.layers[t]) apply_2q_unitary(rho, u, pair.first, pair.second);
        for (int x = 0; x < n; ++x) {
            if (flags.noise) apply_depolarizing(rho, x, field->rate(x, t));
            if (flags.antinoise) apply_antinoise_map(rho, x, q_a);
        }
    }
}

GateRecord evolve_circuit(DensityMatrix& rho, const GateSchedule& schedule,
                          const NoiseField& field, double q_a, std::mt19937_64& rng) {
    GateRecord record = sample_gate_record(schedule, rng);
    apply_record(rho, record, &field, q_a, {true, true});
    return record;
}

void save_gate_record(const GateRecord& record, std::ostream& os) {
    os << "emlab-gate-record 1\n";
    os << record.n_qubits << ' ' << record.depth() << '\n';
    os << std::setprecision(17);
    for (const auto& layer : record.layers) {
        os << layer.size() << '\n';
        for (const auto& [pair, u] : layer) {
            os << pair.first << ' ' << pair.second;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) os << ' ' << u(r, c).real() << ' ' << u(r, c).imag();
            os << '\n';
        }
    }
}

GateRecord load_gate_record(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "emlab-gate-record" || version != 1)
        throw std::runtime_error("load_gate_record: bad header");
    GateRecord record;
    int depth = 0;
    is >> record.n_qubits >> depth;
    record.layers.resize(depth);
    for (int t = 0; t < depth; ++t) {
        std::size_t ngates = 0;
        is >> ngates;
        record.layers[t].resize(ngates);
        for (auto& [pair, u] : record.layers[t]) {
            is >> pair.first >> pair.second;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    double re, im;
                    is >> re >> im;
                    u(r, c) = cd(re, im);
                }
        }
    }
    if (!is) throw std::runtime_error("load_gate_record: truncated input");
    return record;
}

Eigen::MatrixXcd reduced_density(const DensityMatrix& rho, const std::vector<int>& keep_sites) {
    int n = rho.n_qubits;
    int k = static_cast<int>(keep_sites.size());
    std::size_t keep_mask = 0;
    for (int s : keep_sites) {
        if (s < 0 || s >= n) throw std::out_of_range("reduced_density: bad site");
        keep_mask |= std::size_t{1} << s;
    }
    // scatter tables: sub-index bits -> kept-site positions / rest positions
    std::size_t kd = std::size_t{1} << k;
    std::vector<std::size_t> keep_scatter(kd, 0);
    for (std::size_t s = 0; s < kd; ++s)
        for (int bit = 0; bit < k; ++bit)
            if (s & (std::size_t{1} << bit)) keep_scatter[s] |= std::size_t{1} << keep_sites[bit];
    std::vector<int> rest_sites;
    for (int s = 0; s < n; ++s)
        if (!(keep_mask & (std::size_t{1} << s))) rest_sites.push_back(s);
    std::size_t rd = std::size_t{1} << rest_sites.size();
    std::vector<std::size_t> rest_scatter(rd, 0);
    for (std::size_t s = 0; s < rd; ++s)
        for (std::size_t bit = 0; bit < rest_sites.size(); ++bit)
            if (s & (std::size_t{1} << bit)) rest_scatter[s] |= std::size_t{1} << rest_sites[bit];

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
    for (std::size_t rest = 0; rest < rd; ++rest) {
        std::size_t base = rest_scatter[rest];
        for (std::size_t r = 0; r < kd; ++r)
            for (std::size_t c = 0; c < kd; ++c)
                out(r, c) += rho.mat(base | keep_scatter[r], base | keep_scatter[c]);
    }
    return out;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho_reduced) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_reduced, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lam : solver.eigenvalues()) {
        if (std::abs(lam) > 1e-14) s -= lam * std::log2(std::abs(lam));
    }
    return s;
}

double mutual_information(const DensityMatrix& rho, int a, int b) {
    if (a == b) throw std::invalid_argument("mutual_information: sites must differ");
    double sa = von_neumann_entropy(reduced_density(rho, {a}));
    double sb = von_neumann_entropy(reduced_density(rho, {b}));
    double sab = von_neumann_entropy(reduced_density(rho, {a, b}));
    return sa + sb - sab;
}

double pauli_expectation(const DensityMatrix& rho, int site, int axis) {
    Eigen::Matrix2cd sigma;
    switch (axis) {
        case 0: sigma << 0, 1, 1, 0; break;
        case 1: sigma << 0, cd(0, -1), cd(0, 1), 0; break;
        case 2: sigma << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli_expectation: axis must be 0, 1 or 2");
    }
    Eigen::MatrixXcd red = reduced_density(rho, {site});
    return (sigma * red).trace().real();
}

double pauli_prefactor_check(const std::vector<double>& q_schedule, double q_a, int axis,
                             const DensityMatrix& rho0) {
    DensityMatrix rho = rho0;
    double initial = pauli_expectation(rho, 0, axis);
    if (std::abs(initial) < 1e-14)
        throw std::invalid_argument("pauli_prefactor_check: vanishing initial expectation");
    double expected = 1.0;
    for (double q : q_schedule) {
        apply_depolarizing(rho, 0, q);
        apply_antinoise_map(rho, 0, q_a);
        expected *= (1.0 - q) / (1.0 - q_a);
    }
    double ratio = pauli_expectation(rho, 0, axis) / initial;
    if (std::abs(ratio - expected) > 1e-10 * std::max(1.0, std::abs(expected)))
        throw std::runtime_error("pauli_prefactor_check: product law violated");
    return ratio;
}

OutcomeDistribution output_distribution(const DensityMatrix& rho) {
    OutcomeDistribution dist;
    dist.values = rho.mat.diagonal().real();
    dist.kind = DistributionKind::Probability;
    for (int i = 0; i < dist.values.size(); ++i) {
        if (dist.values(i) < -1e-12) {
            dist.kind = DistributionKind::QuasiProbability;
            return dist;
        }
    }
    for (int i = 0; i < dist.values.size(); ++i)
        if (dist.values(i) < 0.0) dist.values(i) = 0.0;
    return dist;
}

std::vector<std::uint64_t> sample_outcomes(const OutcomeDistribution& dist, int m,
                                           std::mt19937_64& rng) {
    if (dist.kind != DistributionKind::Probability)
        throw std::invalid_argument("sample_outcomes: cannot sample a quasi-probability");
    Eigen::Index dim = dist.values.size();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        acc += dist.values(i);
        cdf[i] = acc;
    }
    std::uniform_real_distribution<double> u(0.0, acc);
    std::vector<std::uint64_t> samples(m);
    for (int i = 0; i < m; ++i) {
        double x = u(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
        samples[i] = static_cast<std::uint64_t>(it - cdf.begin());
    }
    return samples;
}

double xeb(const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_0, int n) {
    if (p_n.size() != p_0.size()) throw std::invalid_argument("xeb: length mismatch");
    return std::ldexp(1.0, n) * p_n.dot(p_0) - 1.0;
}

double xeb_mitigated(const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_a, int n) {
    return xeb(p_n, p_a, n);
}

double estimate_xeb_from_samples(const std::vector<std::uint64_t>& samples,
                                 const Eigen::VectorXd& p_a, int n) {
    if (samples.empty()) throw std::invalid_argument("estimate_xeb_from_samples: no samples");
    double acc = 0.0;
    for (std::uint64_t x : samples) acc += p_a(static_cast<Eigen::Index>(x));
    return std::ldexp(1.0, n) * acc / static_cast<double>(samples.size()) - 1.0;
}

double fidelity_F_M(const GateSchedule& schedule, const NoiseField& field, double q_a,
                    const DensityMatrix& rho0, std::mt19937_64& rng) {
    GateRecord record = sample_gate_record(schedule, rng);
    DensityMatrix branch_a = rho0;  // antinoise only
    DensityMatrix branch_n = rho0;  // noise only
    apply_record(branch_a, record, nullptr, q_a, {false, true});
    apply_record(branch_n, record, &field, q_a, {true, false});
    return (branch_a.mat * branch_n.mat).trace().real();
}

SwapToyReport swap_toy_model(double q_l, double q_r, int d) {
    SwapToyReport report;
    report.q_a = 1.0 - std::sqrt((1.0 - q_l) * (1.0 - q_r));
    Eigen::Matrix4cd swap;
    swap << 1, 0, 0, 0,
            0, 0, 1, 0,
            0, 1, 0, 0,
            0, 0, 0, 1;
    // Both sites start with a nonzero X expectation so each traveling Pauli
    // can be tracked against the noiseless reference.
    Eigen::Matrix2cd site_l, site_r;
    site_l << 0.5, 0.25, 0.25, 0.5;
    site_r << 0.5, 0.15, 0.15, 0.5;
    DensityMatrix noisy = DensityMatrix::from_product({site_l, site_r});
    DensityMatrix ref = noisy;
    report.deviation.resize(d + 1);
    report.deviation[0] = {1.0, 1.0};
    for (int t = 1; t <= d; ++t) {
        apply_2q_unitary(noisy, swap, 0, 1);
        apply_depolarizing(noisy, 0, q_l);
        apply_depolarizing(noisy, 1, q_r);
        apply_antinoise_map(noisy, 0, report.q_a);
        apply_antinoise_map(noisy, 1, report.q_a);
        apply_2q_unitary(ref, swap, 0, 1);
        for (int s = 0; s < 2; ++s) {
            // the Pauli that started on site s sits on site (s+t) mod 2
            int where = (s + t) % 2;
            report.deviation[t][s] =
                pauli_expectation(noisy, where, 0) / pauli_expectation(ref, where, 0);
        }
    }
    return report;
}

}  // namespace emlab
