#include "emlab/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace emlab {

MeanFieldParams MeanFieldParams::zero_mean_field(double coupling, double gamma1, double gamma2,
                                                 double p, int n_sites) {
    MeanFieldParams params;
    params.coupling = coupling;
    params.gamma1 = gamma1;
    params.gamma2 = gamma2;
    params.p = p;
    params.gamma_a = p * gamma1 + (1.0 - p) * gamma2;
    params.n_sites = n_sites;
    return params;
}

std::vector<double> delta_rhs(const std::vector<double>& delta,
                              const std::vector<double>& site_delta_rates,
                              const MeanFieldParams& params) {
    if (delta.size() != site_delta_rates.size())
        throw std::invalid_argument("delta_rhs: size mismatch");
    std::size_t n = delta.size();
    double total = 0.0;
    for (double d : delta) total += 3.0 + 4.0 * d;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double interaction = (total - (3.0 + 4.0 * delta[i])) * params.coupling / static_cast<double>(n);
        out[i] = -4.0 * (site_delta_rates[i] + interaction) * delta[i];
    }
    return out;
}

std::pair<double, double> gpm_rhs(double g_plus, double g_minus, const MeanFieldParams& params) {
    if (params.p <= 0.0 || params.p >= 1.0)
        throw std::invalid_argument("gpm_rhs: p must lie in (0,1)");
    double j = params.coupling;
    double c = 2.0 * std::abs(params.delta1()) / (1.0 - params.p);
    double skew = 2.0 * params.p - 1.0;
    double damp = -4.0 * j * (3.0 + 4.0 * g_plus);
    double dgp = damp * g_plus + c * (g_minus - skew * g_plus);
    double dgm = damp * g_minus + c * (g_plus - skew * g_minus);
    return {dgp, dgm};
}

namespace {

bool rk4_run(const RhsFn& rhs, std::vector<double> y, double t_end, double dt,
             double cutoff, Trajectory* record, std::vector<double>* final_state) {
    std::size_t n = y.size();
    auto norm_inf = [&](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    double t = 0.0;
    if (record) {
        record->times.push_back(t);
        record->states.push_back(y);
    }
    std::vector<double> k1, k2, k3, k4, tmp(n);
    while (t < t_end - 0.5 * dt) {
        k1 = rhs(t, y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        k2 = rhs(t + 0.5 * dt, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        k3 = rhs(t + 0.5 * dt, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
        k4 = rhs(t + dt, tmp);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += dt;
        if (record) {
            record->times.push_back(t);
            record->states.push_back(y);
        }
        if (!std::isfinite(norm_inf(y)) || norm_inf(y) > cutoff) {
            if (final_state) *final_state = y;
            return false;  // unphysical runaway
        }
    }
    if (final_state) *final_state = y;
    return true;
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const std::vector<double>& y0, double t_end, double dt,
                     double runaway_cutoff) {
    if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be positive");
    Trajectory traj;
    std::vector<double> final_full;
    bool ok = rk4_run(rhs, y0, t_end, dt, runaway_cutoff, &traj, &final_full);
    traj.diverged = !ok;
    if (ok) {
        std::vector<double> final_half;
        if (rk4_run(rhs, y0, t_end, 0.5 * dt, runaway_cutoff, nullptr, &final_half)) {
            double err = 0.0;
            for (std::size_t i = 0; i < final_full.size(); ++i)
                err = std::max(err, std::abs(final_full[i] - final_half[i]));
            traj.step_halving_error = err;
        }
    }
    return traj;
}

std::pair<std::complex<double>, std::complex<double>> linear_stability(
    double g_plus, double g_minus, const MeanFieldParams& params) {
    double j = params.coupling;
    double c = 2.0 * std::abs(params.delta1()) / (1.0 - params.p);
    double skew = 2.0 * params.p - 1.0;
    double a = -4.0 * j * (3.0 + 8.0 * g_plus) - c * skew;
    double b = c;
    double cc = -16.0 * j * g_minus + c;
    double d = -4.0 * j * (3.0 + 4.0 * g_plus) - c * skew;
    std::complex<double> mean = 0.5 * (a + d);
    std::complex<double> disc = std::sqrt(std::complex<double>(0.25 * (a - d) * (a - d) + b * cc));
    return {mean + disc, mean - disc};
}

std::vector<FixedPoint> fixed_points(const MeanFieldParams& params) {
    double j = params.coupling;
    double d1 = std::abs(params.delta1());
    double c = 2.0 * d1 / (1.0 - params.p);
    double skew = 2.0 * params.p - 1.0;
    std::vector<double> gp_values = {0.0, -(3.0 - d1 / j) / 4.0, -(3.0 + params.delta2() / j) / 4.0};
    std::vector<FixedPoint> out;
    for (double gp : gp_values) {
        double gm = 0.0;
        if (gp != 0.0) {
            double denom = 4.0 * j * (3.0 + 4.0 * gp) + c * skew;
            gm = (std::abs(denom) > 1e-14) ? c * gp / denom : gp;
        }
        auto [l1, l2] = linear_stability(gp, gm, params);
        double max_re = std::max(l1.real(), l2.real());
        Stability s = (std::abs(max_re) < 1e-10) ? Stability::Marginal
                      : (max_re < 0.0 ? Stability::Stable : Stability::Unstable);
        out.push_back({gp, gm, s, {l1, l2}});
    }
    return out;
}

double stability_threshold(double coupling, double p, double rel_tol) {
    if (coupling <= 0.0) throw std::invalid_argument("stability_threshold: J must be positive");
    auto max_eig = [&](double d1_abs) {
        MeanFieldParams params;
        params.coupling = coupling;
        params.p = p;
        params.gamma_a = d1_abs;  // delta1 = -d1_abs
        params.gamma1 = 0.0;
        params.gamma2 = (p < 1.0) ? d1_abs / (1.0 - p) + d1_abs : 0.0;  // keeps zero mean
        auto [l1, l2] = linear_stability(0.0, 0.0, params);
        return std::max(l1.real(), l2.real());
    };
    double lo = 0.0, hi = 10.0 * coupling;
    if (max_eig(hi) < 0.0) throw std::runtime_error("stability_threshold: no instability below 10J");
    while ((hi - lo) > rel_tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (max_eig(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace emlab
