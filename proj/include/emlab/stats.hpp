#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace emlab {

// Disorder/circuit-averaged observable. Non-finite probe values (possible
// above threshold) are counted separately and excluded from the moments.
struct EnsembleResult {
    double mean = 0.0;
    double std_dev = 0.0;
    double std_err = 0.0;
    std::int64_t count = 0;
    std::int64_t nonfinite_count = 0;
};

class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Aggregates a fixed value vector; result is independent of the order the
// values were produced in.
EnsembleResult aggregate(const std::vector<double>& values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace emlab
