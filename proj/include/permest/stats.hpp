#pragma once

#include <cstdint>
#include <vector>

namespace permest {

// Compensated (double-double) accumulator. Keeps a running error term so
// that strongly cancelling alternating sums retain far more accuracy than
// a plain double accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double s = hi_ + x;
    double b = s - hi_;
    double err = (hi_ - (s - b)) + (x - b);
    hi_ = s;
    lo_ += err;
  }
  double value() const { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t count = 0;
};

// Sample mean and standard error (sample standard deviation / sqrt(n)).
MeanSe mean_and_se(const std::vector<double>& xs);

double sample_variance(const std::vector<double>& xs);

struct RatioEstimate {
  double estimate = 0.0;
  double se = 0.0;  // delta-method standard error, covariance included
  double numerator_sum = 0.0;
  double denominator_sum = 0.0;
};

// Pooled ratio sum(num)/sum(den) with its standard error. The numerator
// and denominator of one sample may be correlated, so the covariance term
// is part of the variance formula.
RatioEstimate pooled_ratio(const std::vector<double>& num, const std::vector<double>& den);

// Linear-interpolation quantile (the common "type 7" rule) on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace permest
