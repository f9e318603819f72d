#include "permest/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace permest {

MeanSe mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_and_se: empty sample");
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  double mean = sum.value() / double(xs.size());
  if (xs.size() == 1) return {mean, 0.0, 1};
  CompensatedSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  double var = sq.value() / double(xs.size() - 1);
  return {mean, std::sqrt(std::max(var, 0.0) / double(xs.size())), std::int64_t(xs.size())};
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  double mean = sum.value() / double(xs.size());
  CompensatedSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  return std::max(sq.value(), 0.0) / double(xs.size() - 1);
}

RatioEstimate pooled_ratio(const std::vector<double>& num, const std::vector<double>& den) {
  if (num.empty() || num.size() != den.size())
    throw std::invalid_argument("pooled_ratio: numerators and denominators must pair up");
  std::size_t n = num.size();
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(num[i]);
    sy.add(den[i]);
  }
  RatioEstimate out;
  out.numerator_sum = sx.value();
  out.denominator_sum = sy.value();
  if (out.denominator_sum == 0.0)
    throw std::invalid_argument("pooled_ratio: denominator sum is zero");
  out.estimate = out.numerator_sum / out.denominator_sum;
  if (n < 2) {
    out.se = 0.0;
    return out;
  }
  double xbar = out.numerator_sum / double(n);
  double ybar = out.denominator_sum / double(n);
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = num[i] - xbar;
    double dy = den[i] - ybar;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  double inv = 1.0 / double(n - 1);
  double vxx = sxx.value() * inv;
  double vyy = syy.value() * inv;
  double vxy = sxy.value() * inv;
  double r = out.estimate;
  // Delta method for sum(x)/sum(y); correlated pairs are the normal case.
  double var = (vxx - 2.0 * r * vxy + r * r * vyy) / (double(n) * ybar * ybar);
  out.se = std::sqrt(std::max(var, 0.0));
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile_sorted: q must be in [0,1]");
  double pos = q * double(sorted.size() - 1);
  std::size_t lo = std::size_t(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace permest
