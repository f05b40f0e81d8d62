#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include "emlab/circuit_model.hpp"

namespace emlab {

// 2^n x 2^n Hermitian matrix of a single circuit realization. Physicality is
// not an invariant: antinoise can push eigenvalues negative.
struct DensityMatrix {
    int n_qubits = 0;
    Eigen::MatrixXcd mat;

    static DensityMatrix zero_state(int n);
    static DensityMatrix maximally_mixed(int n);
    static DensityMatrix haar_random_state(int n, std::mt19937_64& rng);
    static DensityMatrix from_product(const std::vector<Eigen::Matrix2cd>& sites);

    double trace_real() const { return mat.trace().real(); }
    double purity() const;
};

enum class DistributionKind { Probability, QuasiProbability };

struct OutcomeDistribution {
    Eigen::VectorXd values;
    DistributionKind kind = DistributionKind::Probability;
};

// The sampled Haar gates of one realization, retained so the identical
// unitaries can be replayed with modified channels.
struct GateRecord {
    int n_qubits = 0;
    std::vector<std::vector<std::pair<QubitPair, Eigen::Matrix4cd>>> layers;

    int depth() const { return static_cast<int>(layers.size()); }
};

// Which channels to interleave when applying a gate record.
struct ChannelFlags {
    bool noise = true;
    bool antinoise = true;
};

Eigen::Matrix4cd sample_haar_2q(std::mt19937_64& rng);

void apply_2q_unitary(DensityMatrix& rho, const Eigen::Matrix4cd& u, int i, int j);
// rho <- (1-q) rho + q Tr_site[rho] (x) I/2
void apply_depolarizing(DensityMatrix& rho, int site, double q);
// rho <- (rho - q_a Tr_site[rho] (x) I/2) / (1 - q_a)
void apply_antinoise_map(DensityMatrix& rho, int site, double q_a);

GateRecord sample_gate_record(const GateSchedule& schedule, std::mt19937_64& rng);
// Per layer: the recorded gates, then per site the selected channels
// (noise at field rate, antinoise at q_a). field may be null when
// flags.noise is false.
void apply_record(DensityMatrix& rho, const GateRecord& record, const NoiseField* field,
                  double q_a, ChannelFlags flags);
// Samples gates and applies them with both channels; returns the record.
GateRecord evolve_circuit(DensityMatrix& rho, const GateSchedule& schedule,
                          const NoiseField& field, double q_a, std::mt19937_64& rng);

void save_gate_record(const GateRecord& record, std::ostream& os);
GateRecord load_gate_record(std::istream& is);

Eigen::MatrixXcd reduced_density(const DensityMatrix& rho, const std::vector<int>& keep_sites);
// -sum_i lambda_i log2|lambda_i| over nonzero eigenvalues; standard entropy
// on physical states, |.| convention otherwise.
double von_neumann_entropy(const Eigen::MatrixXcd& rho_reduced);
double mutual_information(const DensityMatrix& rho, int a, int b);

double pauli_expectation(const DensityMatrix& rho, int site, int axis);  // axis 0,1,2 = X,Y,Z
// Identity-gate circuit: asserts <pauli>_final/<pauli>_initial equals
// prod_t (1-q_t)/(1-q_a) and returns the measured ratio.
double pauli_prefactor_check(const std::vector<double>& q_schedule, double q_a, int axis,
                             const DensityMatrix& rho0);

OutcomeDistribution output_distribution(const DensityMatrix& rho);
std::vector<std::uint64_t> sample_outcomes(const OutcomeDistribution& dist, int m,
                                           std::mt19937_64& rng);
double xeb(const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_0, int n);
double xeb_mitigated(const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_a, int n);
double estimate_xeb_from_samples(const std::vector<std::uint64_t>& samples,
                                 const Eigen::VectorXd& p_a, int n);

// Tr[branch_antinoise_only * branch_noise_only] for one sampled gate record.
double fidelity_F_M(const GateSchedule& schedule, const NoiseField& field, double q_a,
                    const DensityMatrix& rho0, std::mt19937_64& rng);

struct SwapToyReport {
    double q_a = 0.0;
    // deviation[d][s]: ratio of noisy to noiseless Pauli expectation after d
    // layers, for the Pauli starting on site s.
    std::vector<std::array<double, 2>> deviation;
};

// Two-site SWAP circuit with rates (q_L, q_R) constant in time and
// zero-mean-field antinoise 1 - q_a = sqrt((1-q_L)(1-q_R)).
SwapToyReport swap_toy_model(double q_l, double q_r, int d);

}  // namespace emlab
