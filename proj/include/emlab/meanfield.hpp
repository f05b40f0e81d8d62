#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace emlab {

// Brownian-circuit mean-field parameters. delta1 = gamma1 - gamma_a is
// negative at zero mean field (gamma1 < gamma_a), delta2 positive.
struct MeanFieldParams {
    double coupling = 1.0;  // J
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double p = 0.5;
    double gamma_a = 0.0;
    int n_sites = 1;

    static MeanFieldParams zero_mean_field(double coupling, double gamma1, double gamma2,
                                           double p, int n_sites);
    double delta1() const { return gamma1 - gamma_a; }
    double delta2() const { return gamma2 - gamma_a; }
};

// d(delta_i)/dt = -4 [Delta_i + (J/N) sum_{j != i} (3 + 4 delta_j)] delta_i
std::vector<double> delta_rhs(const std::vector<double>& delta,
                              const std::vector<double>& site_delta_rates,
                              const MeanFieldParams& params);

// Reduced large-N pair (G+, G-); general-p form, p in (0,1).
std::pair<double, double> gpm_rhs(double g_plus, double g_minus, const MeanFieldParams& params);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    bool diverged = false;           // hit the runaway cutoff
    double step_halving_error = 0.0; // max deviation vs a dt/2 re-run at t_end
};

using RhsFn = std::function<std::vector<double>(double t, const std::vector<double>&)>;

// Classic fixed-step RK4. Integration stops early with diverged=true when the
// state norm exceeds the runaway cutoff.
Trajectory integrate(const RhsFn& rhs, const std::vector<double>& y0, double t_end, double dt,
                     double runaway_cutoff = 10.0);

enum class Stability { Stable, Unstable, Marginal };

struct FixedPoint {
    double g_plus;
    double g_minus;
    Stability stability;
    std::complex<double> eigenvalues[2];
};

// The three closed-form G+ steady states with stability labels.
std::vector<FixedPoint> fixed_points(const MeanFieldParams& params);

// Eigenvalues of the analytic Jacobian of gpm_rhs at (g_plus, g_minus).
std::pair<std::complex<double>, std::complex<double>> linear_stability(
    double g_plus, double g_minus, const MeanFieldParams& params);

// Bisection on the largest origin eigenvalue; returns the critical |Delta_1|
// (= 3J) to the requested relative tolerance.
double stability_threshold(double coupling, double p = 0.5, double rel_tol = 1e-8);

}  // namespace emlab
