#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace emlab {

enum class TopologyKind { Chain1dPeriodic, AllToAll };

struct Topology {
    TopologyKind kind = TopologyKind::Chain1dPeriodic;
    int n_qubits = 2;

    void validate() const;
};

using QubitPair = std::pair<int, int>;

// Layers of disjoint qubit pairs acted on by Haar gates.
struct GateSchedule {
    int n_qubits = 0;
    std::vector<std::vector<QubitPair>> layers;

    int depth() const { return static_cast<int>(layers.size()); }
    void validate() const;
};

enum class NoiseMode { Spacetime, Quenched };

// Binary disorder model for the depolarizing rates.
struct DisorderSpec {
    double p = 0.5;        // probability of drawing q1
    double q1 = 0.0;
    double q2 = 0.0;       // q1 < q2 unless degenerate
    NoiseMode mode = NoiseMode::Spacetime;
    std::uint64_t seed = 0;

    void validate() const;
};

// Per-(site, layer) depolarizing rates.
struct NoiseField {
    int n_qubits = 0;
    int depth = 0;
    bool quenched = false;
    std::vector<double> rates;  // rates[x + n_qubits * t]

    double rate(int x, int t) const { return rates[x + static_cast<std::size_t>(n_qubits) * t]; }
};

enum class MitigationMode { ZeroMeanField, Fixed };

struct MitigationSpec {
    MitigationMode mode = MitigationMode::ZeroMeanField;
    double q_a = 0.0;

    static MitigationSpec zero_mean_field(const DisorderSpec& spec);
    static MitigationSpec fixed(double q_a);
};

struct DisorderMoments {
    double sigma;  // std deviation of the binary rate distribution
    double q_bar;  // mean rate
};

GateSchedule build_brickwork_schedule(int n, int d);
GateSchedule build_all_to_all_schedule(int n, int d, std::mt19937_64& rng);

NoiseField sample_noise_field(const DisorderSpec& spec, int n, int d, std::mt19937_64& rng);
// Convenience overload: stream derived from spec.seed.
NoiseField sample_noise_field(const DisorderSpec& spec, int n, int d);

// (1 - q_a) = (1 - q1)^p (1 - q2)^(1-p)
double zero_mean_field_rate(double p, double q1, double q2);

// sigma = sqrt(p (1-p)) * (q2 - q1),  q_bar = p q1 + (1-p) q2
DisorderMoments disorder_sigma(double p, double q1, double q2);

// Inverse of the above: rates with given mean and sigma/q_bar ratio at fixed p.
DisorderSpec disorder_from_ratio(double p, double q_bar, double sigma_over_qbar,
                                 NoiseMode mode, std::uint64_t seed);

}  // namespace emlab
