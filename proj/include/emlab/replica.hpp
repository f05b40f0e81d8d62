#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "emlab/circuit_model.hpp"

namespace emlab {

// Subset of sites {0..n-1}.
struct Region {
    std::vector<int> sites;

    std::uint32_t mask(int n) const;
};

enum class SimpleInitForm { HaarOnRegion, ProductOnRegion };

// Circuit-averaged two-copy state expanded in per-site operators I and S.
// weights is indexed by bitstrings c in {I,S}^n with bit x = 1 meaning S at
// site x. Gate, noise and antinoise act as local transition matrices on this
// vector; all three are trace-preserving. In signed mode the state is split
// as weights = w_plus - w_minus with both parts entrywise nonnegative, which
// tracks the sign structure the antinoise injects.
class ReplicaState {
  public:
    static ReplicaState init_haar_global(int n, bool signed_mode = false);
    static ReplicaState init_product_state(int n, bool signed_mode = false);
    static ReplicaState init_simple(int n, const Region& region, SimpleInitForm form,
                                    bool signed_mode = false);
    static ReplicaState from_weights(int n, std::vector<double> weights,
                                     bool signed_mode = false);

    int n_qubits() const { return n_; }
    bool signed_mode() const { return signed_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& w_plus() const { return wp_; }
    const std::vector<double>& w_minus() const { return wm_; }

    // II -> II, SS -> SS, IS and SI -> (2/5)(II + SS)
    void apply_gate(int i, int j);
    // I -> I, S -> ((1-(1-q)^2)/2) I + (1-q)^2 S
    void apply_noise(int site, double q);
    // I -> I, S -> ((1-(1-q_a)^-2)/2) I + (1-q_a)^-2 S
    void apply_antinoise(int site, double q_a);
    // Gates on every pair in the layer, then noise(q_{x,t}) + antinoise(q_a)
    // on every site.
    void step_layer(const std::vector<QubitPair>& layer, const NoiseField& field, int t,
                    double q_a);

    // Sum_c w(c) 4^{#I} 2^{#S}
    double trace() const;
    // E_U[Tr rho_A^2] via the swap trick.
    double avg_purity(const Region& region) const;
    double avg_purity_mask(std::uint32_t region_mask) const;
    // I~_ab = -log2 P_a - log2 P_b + log2 P_ab; non-finite when a purity
    // goes non-positive (possible above threshold).
    double correlation_metric(int a, int b) const;
    // -log2 E_U[Tr rho_site^2]
    double renyi2_probe(int site) const;
    // (Tr[rho2+], Tr[rho2-]); requires signed mode.
    std::pair<double, double> sign_resolved_traces() const;

  private:
    ReplicaState(int n, bool signed_mode);

    // Shared per-site channel: I -> I, S -> s_to_i * I + s_to_s * S.
    void apply_site_channel(int site, double s_to_i, double s_to_s);

    int n_ = 0;
    bool signed_ = false;
    std::vector<double> w_;
    std::vector<double> wp_, wm_;
};

}  // namespace emlab
