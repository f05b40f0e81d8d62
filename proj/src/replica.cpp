#include "emlab/replica.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace emlab {

namespace {

constexpr double kGateMix = 2.0 / 5.0;

inline double kahan_sum(const std::vector<double>& v, const double* scale_by_popcount,
                        std::uint32_t xor_mask) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) {
        int pc = std::popcount(static_cast<std::uint32_t>(c) ^ xor_mask);
        double term = v[c] * scale_by_popcount[pc];
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

std::uint32_t Region::mask(int n) const {
    std::uint32_t m = 0;
    for (int s : sites) {
        if (s < 0 || s >= n) throw std::out_of_range("Region: site out of range");
        m |= (1u << s);
    }
    return m;
}

ReplicaState::ReplicaState(int n, bool signed_mode) : n_(n), signed_(signed_mode) {
    if (n < 1 || n > 26) throw std::invalid_argument("ReplicaState: n outside [1,26]");
    std::size_t dim = std::size_t{1} << n;
    w_.assign(dim, 0.0);
    if (signed_) {
        wp_.assign(dim, 0.0);
        wm_.assign(dim, 0.0);
    }
}

ReplicaState ReplicaState::init_haar_global(int n, bool signed_mode) {
    ReplicaState st(n, signed_mode);
    double dim = std::ldexp(1.0, n);
    double alpha = 1.0 / (dim * (dim + 1.0));
    std::size_t all_s = (std::size_t{1} << n) - 1;
    st.w_[0] = alpha;
    st.w_[all_s] = alpha;
    if (signed_mode) {
        st.wp_[0] = alpha;
        st.wp_[all_s] = alpha;
    }
    return st;
}

ReplicaState ReplicaState::init_product_state(int n, bool signed_mode) {
    ReplicaState st(n, signed_mode);
    double w = std::pow(6.0, -n);
    for (auto& x : st.w_) x = w;
    if (signed_mode)
        for (auto& x : st.wp_) x = w;
    return st;
}

ReplicaState ReplicaState::init_simple(int n, const Region& region, SimpleInitForm form,
                                       bool signed_mode) {
    if (region.sites.empty()) throw std::invalid_argument("init_simple: empty region");
    std::uint32_t m = region.mask(n);
    int a = std::popcount(m);
    ReplicaState st(n, signed_mode);
    // Sites outside the region carry I with weight 1/4 each (maximally mixed).
    double outside = std::ldexp(1.0, -2 * (n - a));
    if (form == SimpleInitForm::HaarOnRegion) {
        double da = std::ldexp(1.0, a);
        double alpha = outside / (da * (da + 1.0));
        st.w_[0] = alpha;
        st.w_[m] = alpha;
    } else {
        // (I+S)/6 per region site: every sub-configuration of the region mask.
        double w = outside * std::pow(6.0, -a);
        // enumerate submasks of m
        std::uint32_t sub = m;
        while (true) {
            st.w_[sub] = w;
            if (sub == 0) break;
            sub = (sub - 1) & m;
        }
    }
    if (signed_mode) st.wp_ = st.w_;
    return st;
}

ReplicaState ReplicaState::from_weights(int n, std::vector<double> weights, bool signed_mode) {
    ReplicaState st(n, signed_mode);
    if (weights.size() != st.w_.size())
        throw std::invalid_argument("from_weights: wrong vector length");
    st.w_ = std::move(weights);
    if (signed_mode) {
        for (std::size_t c = 0; c < st.w_.size(); ++c) {
            if (st.w_[c] >= 0.0)
                st.wp_[c] = st.w_[c];
            else
                st.wm_[c] = -st.w_[c];
        }
    }
    return st;
}

void ReplicaState::apply_gate(int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw std::out_of_range("apply_gate: bad pair");
    std::size_t bi = std::size_t{1} << i;
    std::size_t bj = std::size_t{1} << j;
    std::size_t lo = std::min(bi, bj), hi = std::max(bi, bj);
    std::size_t dim = w_.size();
    auto pass = [&](std::vector<double>& v) {
        for (std::size_t h = 0; h < dim; h += 2 * hi)
            for (std::size_t m = h; m < h + hi; m += 2 * lo)
                for (std::size_t base = m; base < m + lo; ++base) {
                    double dw = v[base | lo] + v[base | hi];
                    if (dw != 0.0) {
                        double mix = kGateMix * dw;
                        v[base] += mix;
                        v[base | lo | hi] += mix;
                        v[base | lo] = 0.0;
                        v[base | hi] = 0.0;
                    }
                }
    };
    pass(w_);
    if (signed_) {
        pass(wp_);
        pass(wm_);
    }
}

void ReplicaState::apply_site_channel(int site, double s_to_i, double s_to_s) {
    std::size_t b = std::size_t{1} << site;
    std::size_t dim = w_.size();
    auto pass = [&](std::vector<double>& v, double si) {
        for (std::size_t h = 0; h < dim; h += 2 * b)
            for (std::size_t idx = h; idx < h + b; ++idx) {
                double ws = v[idx | b];
                v[idx] += si * ws;
                v[idx | b] = ws * s_to_s;
            }
    };
    pass(w_, s_to_i);
    if (signed_) {
        if (s_to_i >= 0.0) {
            pass(wp_, s_to_i);
            pass(wm_, s_to_i);
        } else {
            // Negative S->I coefficient crosses between the sign sectors so
            // both stay nonnegative.
            double a = -s_to_i;
            for (std::size_t h = 0; h < dim; h += 2 * b)
                for (std::size_t idx = h; idx < h + b; ++idx) {
                    double wps = wp_[idx | b];
                    double wms = wm_[idx | b];
                    wp_[idx] += a * wms;
                    wm_[idx] += a * wps;
                    wp_[idx | b] = wps * s_to_s;
                    wm_[idx | b] = wms * s_to_s;
                }
        }
    }
}

void ReplicaState::apply_noise(int site, double q) {
    if (site < 0 || site >= n_) throw std::out_of_range("apply_noise: bad site");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("apply_noise: q outside [0,1]");
    double b = (1.0 - q) * (1.0 - q);
    apply_site_channel(site, (1.0 - b) / 2.0, b);
}

void ReplicaState::apply_antinoise(int site, double q_a) {
    if (site < 0 || site >= n_) throw std::out_of_range("apply_antinoise: bad site");
    if (q_a < 0.0 || q_a >= 1.0) throw std::invalid_argument("apply_antinoise: q_a outside [0,1)");
    double b = 1.0 / ((1.0 - q_a) * (1.0 - q_a));
    apply_site_channel(site, (1.0 - b) / 2.0, b);
}

void ReplicaState::step_layer(const std::vector<QubitPair>& layer, const NoiseField& field, int t,
                              double q_a) {
    if (field.n_qubits != n_) throw std::invalid_argument("step_layer: field dimension mismatch");
    if (q_a < 0.0 || q_a >= 1.0) throw std::invalid_argument("step_layer: q_a outside [0,1)");
    for (auto [i, j] : layer) apply_gate(i, j);
    for (int x = 0; x < n_; ++x) {
        // Noise followed by antinoise composes into a single channel with
        // S->S coefficient ((1-q_x)/(1-q_a))^2.  Applying the composite keeps
        // the sign sectors from inflating against each other at sites where
        // the two rates coincide.
        double r = (1.0 - field.rate(x, t)) / (1.0 - q_a);
        double b = r * r;
        apply_site_channel(x, (1.0 - b) / 2.0, b);
    }
}

double ReplicaState::trace() const {
    return avg_purity_mask(0);
}

double ReplicaState::avg_purity_mask(std::uint32_t region_mask) const {
    // Per-site weight 4 when the configuration matches (I outside, S inside
    // the region), 2 otherwise: 2^(2n - popcount(c ^ mask)).
    double scale[27];
    for (int pc = 0; pc <= n_; ++pc) scale[pc] = std::ldexp(1.0, 2 * n_ - pc);
    return kahan_sum(w_, scale, region_mask);
}

double ReplicaState::avg_purity(const Region& region) const {
    return avg_purity_mask(region.mask(n_));
}

double ReplicaState::correlation_metric(int a, int b) const {
    if (a == b) throw std::invalid_argument("correlation_metric: sites must differ");
    double pa = avg_purity_mask(1u << a);
    double pb = avg_purity_mask(1u << b);
    double pab = avg_purity_mask((1u << a) | (1u << b));
    if (pa <= 0.0 || pb <= 0.0 || pab <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return -std::log2(pa) - std::log2(pb) + std::log2(pab);
}

double ReplicaState::renyi2_probe(int site) const {
    double p = avg_purity_mask(1u << site);
    if (p <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -std::log2(p);
}

std::pair<double, double> ReplicaState::sign_resolved_traces() const {
    if (!signed_) throw std::logic_error("sign_resolved_traces: signed mode disabled");
    double scale[27];
    for (int pc = 0; pc <= n_; ++pc) scale[pc] = std::ldexp(1.0, 2 * n_ - pc);
    return {kahan_sum(wp_, scale, 0), kahan_sum(wm_, scale, 0)};
}

}  // namespace emlab
