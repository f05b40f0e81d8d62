#include "emlab/circuit_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "emlab/rng.hpp"

namespace emlab {

void Topology::validate() const {
    if (n_qubits < 2) throw std::invalid_argument("Topology: n_qubits must be >= 2");
    if (kind == TopologyKind::AllToAll && n_qubits % 2 != 0)
        throw std::invalid_argument("Topology: all-to-all pairing needs even n_qubits");
}

void GateSchedule::validate() const {
    for (const auto& layer : layers) {
        std::vector<char> seen(n_qubits, 0);
        for (auto [i, j] : layer) {
            if (i < 0 || j < 0 || i >= n_qubits || j >= n_qubits || i == j)
                throw std::invalid_argument("GateSchedule: bad pair");
            if (seen[i] || seen[j])
                throw std::invalid_argument("GateSchedule: qubit repeated within a layer");
            seen[i] = seen[j] = 1;
        }
    }
}

void DisorderSpec::validate() const {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("DisorderSpec: p outside [0,1]");
    if (q1 < 0.0 || q2 >= 1.0 || q1 > q2)
        throw std::invalid_argument("DisorderSpec: need 0 <= q1 <= q2 < 1");
}

MitigationSpec MitigationSpec::zero_mean_field(const DisorderSpec& spec) {
    spec.validate();
    return {MitigationMode::ZeroMeanField, zero_mean_field_rate(spec.p, spec.q1, spec.q2)};
}

MitigationSpec MitigationSpec::fixed(double q_a) {
    if (q_a < 0.0 || q_a >= 1.0) throw std::invalid_argument("MitigationSpec: q_a outside [0,1)");
    return {MitigationMode::Fixed, q_a};
}

GateSchedule build_brickwork_schedule(int n, int d) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("brickwork schedule needs even n >= 2");
    if (d < 1) throw std::invalid_argument("brickwork schedule needs d >= 1");
    GateSchedule sched;
    sched.n_qubits = n;
    sched.layers.reserve(d);
    for (int t = 0; t < d; ++t) {
        std::vector<QubitPair> layer;
        layer.reserve(n / 2);
        if (n == 2) {
            layer.emplace_back(0, 1);
        } else if (t % 2 == 0) {
            for (int k = 0; k < n / 2; ++k) layer.emplace_back(2 * k, 2 * k + 1);
        } else {
            // periodic boundary: wrap pair is (n-1, 0), stored ordered
            for (int k = 0; k < n / 2; ++k) {
                int a = 2 * k + 1;
                int b = (2 * k + 2) % n;
                layer.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
        sched.layers.push_back(std::move(layer));
    }
    return sched;
}

GateSchedule build_all_to_all_schedule(int n, int d, std::mt19937_64& rng) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("all-to-all schedule needs even n >= 2");
    GateSchedule sched;
    sched.n_qubits = n;
    sched.layers.reserve(d);
    std::vector<int> perm(n);
    for (int t = 0; t < d; ++t) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<QubitPair> layer;
        layer.reserve(n / 2);
        for (int k = 0; k < n / 2; ++k) {
            int a = perm[2 * k], b = perm[2 * k + 1];
            layer.emplace_back(std::min(a, b), std::max(a, b));
        }
        sched.layers.push_back(std::move(layer));
    }
    return sched;
}

NoiseField sample_noise_field(const DisorderSpec& spec, int n, int d, std::mt19937_64& rng) {
    spec.validate();
    NoiseField field;
    field.n_qubits = n;
    field.depth = d;
    field.quenched = (spec.mode == NoiseMode::Quenched);
    field.rates.resize(static_cast<std::size_t>(n) * d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (field.quenched) {
        std::vector<double> row(n);
        for (int x = 0; x < n; ++x) row[x] = (u(rng) < spec.p) ? spec.q1 : spec.q2;
        for (int t = 0; t < d; ++t)
            std::copy(row.begin(), row.end(), field.rates.begin() + static_cast<std::size_t>(n) * t);
    } else {
        for (auto& r : field.rates) r = (u(rng) < spec.p) ? spec.q1 : spec.q2;
    }
    return field;
}

NoiseField sample_noise_field(const DisorderSpec& spec, int n, int d) {
    auto rng = make_stream(spec.seed, 0);
    return sample_noise_field(spec, n, d, rng);
}

double zero_mean_field_rate(double p, double q1, double q2) {
    return 1.0 - std::pow(1.0 - q1, p) * std::pow(1.0 - q2, 1.0 - p);
}

DisorderMoments disorder_sigma(double p, double q1, double q2) {
    return {std::sqrt(p * (1.0 - p)) * (q2 - q1), p * q1 + (1.0 - p) * q2};
}

DisorderSpec disorder_from_ratio(double p, double q_bar, double sigma_over_qbar,
                                 NoiseMode mode, std::uint64_t seed) {
    // q1 = q_bar - (1-p) delta, q2 = q_bar + p delta with delta = q2 - q1.
    double delta = sigma_over_qbar * q_bar / std::sqrt(p * (1.0 - p));
    DisorderSpec spec;
    spec.p = p;
    spec.q1 = q_bar - (1.0 - p) * delta;
    spec.q2 = q_bar + p * delta;
    spec.mode = mode;
    spec.seed = seed;
    spec.validate();
    return spec;
}

}  // namespace emlab
