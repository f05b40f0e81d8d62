#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emlab/circuit_model.hpp"
#include "emlab/stats.hpp"

namespace emlab {

enum class Engine { Replica, Exact };

enum class Probe {
    CorrelationMetric,  // replica I~_ab
    MutualInformation,  // exact-sim I_ab
    Renyi2Probe,        // replica single-site -log2 purity
};

struct SweepSpec {
    Engine engine = Engine::Replica;
    TopologyKind topology = TopologyKind::AllToAll;
    Probe probe = Probe::Renyi2Probe;
    std::vector<int> sizes;
    int depth = 0;  // 0 means d = N
    std::vector<double> sigma_over_qbar;
    double q_bar = 0.3;
    double p = 0.5;
    NoiseMode noise_mode = NoiseMode::Spacetime;
    int realizations = 100;
    std::uint64_t master_seed = 0;
    int workers = 1;

    void validate() const;
    int depth_for(int n) const { return depth > 0 ? depth : n; }
};

struct SweepRow {
    int n = 0;
    double sigma_over_qbar = 0.0;
    int depth = 0;
    EnsembleResult result;
};

using SweepTable = std::vector<SweepRow>;

// Runs `realizations` independent evaluations of the closure (argument is the
// realization index) across `workers` threads and aggregates. The closure is
// responsible for deriving its own RNG stream from the index.
EnsembleResult disorder_average(const std::function<double(int)>& observable, int realizations,
                                int workers);

SweepTable sweep(const SweepSpec& spec);

struct CrossingResult {
    bool found = false;
    double sigma_c = 0.0;
    double spread = 0.0;  // half the range of pairwise crossings
    std::vector<double> pairwise;
};

struct Curve {
    int n = 0;
    std::vector<double> x;
    std::vector<double> y;
};

std::vector<Curve> curves_from_table(const SweepTable& table);

// Pairwise crossings via linear interpolation between grid points; median
// and spread across size pairs.
CrossingResult find_crossing(const std::vector<Curve>& curves);

struct CollapseSpec {
    double sigma_c = 0.0;
    double mu = 1.0;            // x-axis exponent: x -> (x - sigma_c) N^mu
    std::optional<double> y_exponent;  // optional y -> y N^y_exponent
};

struct CollapseResult {
    std::vector<Curve> collapsed;
    double quality = 0.0;  // summed squared deviation across curves on a common grid
};

CollapseResult scaling_collapse(const std::vector<Curve>& curves, const CollapseSpec& spec);

struct CollapseScanCell {
    double sigma_c;
    double mu;
    double quality;
};

std::vector<CollapseScanCell> collapse_scan(const std::vector<Curve>& curves,
                                            const std::vector<double>& sigma_c_grid,
                                            const std::vector<double>& mu_grid);

// x at the maximal y; interior is false when the max sits on the grid edge.
struct PeakLocation {
    double x = 0.0;
    double y = 0.0;
    bool interior = false;
};

PeakLocation find_peak(const Curve& curve);

struct GrowthFit {
    double slope = 0.0;  // per layer, of log Tr[rho2+]
    double intercept = 0.0;
    double r_squared = 0.0;
    int d_min = 0;
    int d_max = 0;
    int region_size = 0;  // longest q1 run used for the initial condition
};

enum class SimpleForm { HaarOnRegion, ProductOnRegion };

// Quenched-1D sign-resolved growth experiment: prepares the simple initial
// condition on the longest contiguous q1 run and fits log Tr[rho2+] vs depth
// on the upper half of the depth range.
GrowthFit instability_experiment(int n, const DisorderSpec& disorder, int d_max, SimpleForm form,
                                 std::uint64_t master_seed, int realization = 0);

struct FidelitySpec {
    std::vector<int> sizes;
    std::vector<int> depths;
    double sigma_over_qbar = 0.0;
    double q_bar = 0.1;
    double p = 0.5;
    bool mitigated = true;  // false: q_a = 0
    int noise_realizations = 20;
    int circuits_per_noise = 5;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct FidelityRow {
    int n = 0;
    int d = 0;
    double mean_neg_log_fm = 0.0;   // <-log F_M> / N
    double std_log_fm = 0.0;        // std over noise realizations
    double mean_neg_log_fxeb = 0.0; // <-log (1 + Fbar_XEB_M)> convention below
    double std_log_fxeb = 0.0;
    int count = 0;
};

struct FidelityTable {
    std::vector<FidelityRow> rows;
    // log-log slope of std_log_* vs d, one entry per system size
    std::vector<double> beta_fm;
    std::vector<double> beta_fxeb;
};

FidelityTable fidelity_scaling(const FidelitySpec& spec);

}  // namespace emlab
