#include "emlab/stats.hpp"

#include <stdexcept>

namespace emlab {

EnsembleResult aggregate(const std::vector<double>& values) {
    EnsembleResult result;
    KahanSum sum;
    for (double v : values) {
        if (!std::isfinite(v)) {
            ++result.nonfinite_count;
            continue;
        }
        sum.add(v);
        ++result.count;
    }
    if (result.count == 0) return result;
    result.mean = sum.value() / static_cast<double>(result.count);
    KahanSum sq;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        double d = v - result.mean;
        sq.add(d * d);
    }
    if (result.count > 1) {
        result.std_dev = std::sqrt(sq.value() / static_cast<double>(result.count - 1));
        result.std_err = result.std_dev / std::sqrt(static_cast<double>(result.count));
    }
    return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    double n = static_cast<double>(x.size());
    KahanSum sx, sy;
    for (double v : x) sx.add(v);
    for (double v : y) sy.add(v);
    double mx = sx.value() / n, my = sy.value() / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace emlab
