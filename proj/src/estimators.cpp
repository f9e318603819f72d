#include "permest/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace permest {

namespace {

constexpr double kHalfSqrt3 = 0.86602540378443864676;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_nonnegative(const Matrix& a, const char* who) {
  if (!a.square()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite entry");
    if (v < 0.0)
      throw std::invalid_argument(std::string(who) + ": negative entry (the permanent estimators need a_ij >= 0)");
  }
}

}  // namespace

DistributionKind distribution_from_name(const std::string& name) {
  if (name == "gg-rademacher" || name == "rademacher") return {DistKind::Rademacher, 1};
  if (name == "gg-real-gauss" || name == "real_gaussian") return {DistKind::RealGaussian, 1};
  if (name == "gg-cube-roots" || name == "cube_roots") return {DistKind::CubeRoots, 1};
  if (name == "gg-complex-gauss" || name == "complex_gaussian") return {DistKind::ComplexGaussian, 1};
  if (name == "gg-quaternion" || name == "quaternion_gaussian") return {DistKind::QuaternionGaussian, 1};
  throw std::invalid_argument("unknown distribution kind '" + name + "'");
}

MeanCheck distribution_mean_check(const DistributionKind& kind, std::int64_t n_draws,
                                  std::uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("distribution_mean_check: n_draws >= 1");
  SampleStream g(seed);
  double sum = 0.0;
  std::int64_t count = 0;
  double sigma = 1.0;
  for (std::int64_t s = 0; s < n_draws; ++s) {
    switch (kind.tag) {
      case DistKind::Rademacher:
        sum += g.rademacher();
        count += 1;
        sigma = 1.0;
        break;
      case DistKind::RealGaussian:
        sum += g.normal();
        count += 1;
        sigma = 1.0;
        break;
      case DistKind::CubeRoots: {
        int idx = g.uniform_index(3);
        double re = (idx == 0) ? 1.0 : -0.5;
        double im = (idx == 0) ? 0.0 : (idx == 1 ? kHalfSqrt3 : -kHalfSqrt3);
        sum += re + im;
        count += 2;
        sigma = kInvSqrt2;  // per-component variance 1/2
        break;
      }
      case DistKind::ComplexGaussian:
        sum += kInvSqrt2 * (g.normal() + g.normal());
        count += 2;
        sigma = kInvSqrt2;
        break;
      case DistKind::QuaternionGaussian:
        for (int c = 0; c < 4; ++c) sum += 0.5 * g.normal();
        count += 4;
        sigma = 0.5;
        break;
      case DistKind::MatrixGaussian:
        for (int c = 0; c < kind.d * kind.d; ++c) sum += g.normal();
        count += kind.d * kind.d;
        sigma = 1.0;
        break;
    }
  }
  MeanCheck mc;
  mc.mean = sum / double(count);
  mc.sigma = sigma;
  mc.components = count;
  mc.threshold = 4.0 * sigma / std::sqrt(double(count));
  mc.pass = std::abs(mc.mean) < mc.threshold;
  return mc;
}

double study_determinant(const AlgebraMatrix& q) {
  if (q.layers.size() != 4)
    throw std::invalid_argument("study_determinant: expected a quaternionic matrix (4 layers)");
  int n = q.n;
  if (n < 1) throw std::invalid_argument("study_determinant: n >= 1 required");
  const Matrix& l0 = q.layers[0];
  const Matrix& l1 = q.layers[1];
  const Matrix& l2 = q.layers[2];
  const Matrix& l3 = q.layers[3];
  // q = X + Y j with X = l0 + i l1, Y = l2 + i l3; the complexification is
  // [[X, Y], [-conj(Y), conj(X)]].
  int nn = 2 * n;
  std::vector<std::complex<double>> m(std::size_t(nn) * nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::complex<double> x(l0(i, j), l1(i, j));
      std::complex<double> y(l2(i, j), l3(i, j));
      m[std::size_t(i) * nn + j] = x;
      m[std::size_t(i) * nn + n + j] = y;
      m[std::size_t(n + i) * nn + j] = -std::conj(y);
      m[std::size_t(n + i) * nn + n + j] = std::conj(x);
    }
  std::complex<double> det = complex_determinant(std::move(m), nn);
  double scale = std::max(1.0, std::abs(det));
  if (std::abs(det.imag()) > 1e-9 * scale)
    throw std::runtime_error("study_determinant: complexified determinant has a non-real part");
  double v = det.real();
  if (v < -1e-9 * scale)
    throw std::runtime_error("study_determinant: complexified determinant is negative");
  return v < 0.0 ? 0.0 : v;
}

namespace {

EstimatorSample gg_real(const Matrix& a, const DistributionKind& kind, std::uint64_t seed) {
  SampleStream g(seed);
  int n = a.rows();
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = (kind.tag == DistKind::Rademacher) ? g.rademacher() : g.normal();
      b(i, j) = u * std::sqrt(a(i, j));
    }
  double det = determinant(b);
  double alpha = det * det;
  return {alpha, 1.0, alpha, seed};
}

EstimatorSample gg_complex(const Matrix& a, const DistributionKind& kind, std::uint64_t seed) {
  SampleStream g(seed);
  int n = a.rows();
  std::vector<std::complex<double>> b(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::complex<double> u;
      if (kind.tag == DistKind::CubeRoots) {
        int idx = g.uniform_index(3);
        u = (idx == 0) ? std::complex<double>(1.0, 0.0)
                       : std::complex<double>(-0.5, idx == 1 ? kHalfSqrt3 : -kHalfSqrt3);
      } else {
        u = std::complex<double>(kInvSqrt2 * g.normal(), kInvSqrt2 * g.normal());
      }
      b[std::size_t(i) * n + j] = u * std::sqrt(a(i, j));
    }
  double alpha = std::norm(complex_determinant(std::move(b), n));
  return {alpha, 1.0, alpha, seed};
}

EstimatorSample gg_quaternion(const Matrix& a, std::uint64_t seed) {
  SampleStream g(seed);
  int n = a.rows();
  AlgebraSpec spec = builtin_algebra(BuiltinAlgebra::Quaternions);
  AlgebraMatrix b = AlgebraMatrix::zero(spec, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = std::sqrt(a(i, j));
      for (int c = 0; c < 4; ++c) b.layers[std::size_t(c)](i, j) = 0.5 * g.normal() * s;
    }
  double alpha = study_determinant(b);
  return {alpha, 1.0, alpha, seed};
}

}  // namespace

EstimatorSample gg_estimate(const Matrix& a, const DistributionKind& kind, std::uint64_t seed) {
  require_nonnegative(a, "gg_estimate");
  switch (kind.tag) {
    case DistKind::Rademacher:
    case DistKind::RealGaussian:
      return gg_real(a, kind, seed);
    case DistKind::CubeRoots:
    case DistKind::ComplexGaussian:
      return gg_complex(a, kind, seed);
    case DistKind::QuaternionGaussian:
      return gg_quaternion(a, seed);
    case DistKind::MatrixGaussian:
      break;
  }
  throw std::invalid_argument("gg_estimate: use sdet_estimate for the matrix-Gaussian kind");
}

namespace {

AlgebraSpec make_sdet_spec(int n, int d) {
  if (n < 1) throw std::invalid_argument("SdetEstimator: n >= 1 required");
  if (d < 1 || d > 3)
    throw std::invalid_argument("SdetEstimator: d must be in 1..3 (cost grows as n^(d^2+3))");
  return builtin_algebra(BuiltinAlgebra::MatrixAlgebra, d);
}

}  // namespace

SdetEstimator::SdetEstimator(int n, int d)
    : n_(n), d_(d), spec_(make_sdet_spec(n, d)), table_(spec_, n) {}

EstimatorSample SdetEstimator::sample(const Matrix& a, std::uint64_t seed,
                                      bool independent_denominator) const {
  require_nonnegative(a, "sdet_estimate");
  if (a.rows() != n_) throw std::invalid_argument("sdet_estimate: matrix size differs from estimator n");
  SampleStream g(seed);
  int dd = d_ * d_;
  AlgebraMatrix b = AlgebraMatrix::zero(spec_, n_);
  AlgebraMatrix e = AlgebraMatrix::zero(spec_, n_);
  std::vector<double> u(static_cast<std::size_t>(dd));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      for (int c = 0; c < dd; ++c) u[std::size_t(c)] = g.normal();
      double s = std::sqrt(a(i, j));
      for (int c = 0; c < dd; ++c) b.layers[std::size_t(c)](i, j) = u[std::size_t(c)] * s;
      if (i == j && !independent_denominator)
        for (int c = 0; c < dd; ++c) e.layers[std::size_t(c)](i, i) = u[std::size_t(c)];
    }
  if (independent_denominator) {
    // Fresh diagonal draws, consumed after all of B's.
    for (int i = 0; i < n_; ++i)
      for (int c = 0; c < dd; ++c) e.layers[std::size_t(c)](i, i) = g.normal();
  }
  double num = norm_sq(spec_, sdet(spec_, b, table_));
  double den = norm_sq(spec_, sdet(spec_, e, table_));
  if (!(den > 0.0))
    throw std::runtime_error("sdet_estimate: denominator |sdet E|^2 vanished for this draw");
  return {num, den, num / den, seed};
}

EstimatorSample sdet_estimate(const Matrix& a, int d, std::uint64_t seed) {
  require_nonnegative(a, "sdet_estimate");
  SdetEstimator est(a.rows(), d);
  return est.sample(a, seed);
}

EstimatorSample cdet_estimate(const Matrix& a, int d, std::uint64_t seed) {
  require_nonnegative(a, "cdet_estimate");
  int n = a.rows();
  if (n > 8) throw std::invalid_argument("cdet_estimate: n <= 8 (factorial-time Cayley determinant)");
  if (d < 1 || d > 8) throw std::invalid_argument("cdet_estimate: d must be in 1..8");
  AlgebraSpec spec = builtin_algebra(BuiltinAlgebra::MatrixAlgebra, d);
  SampleStream g(seed);
  int dd = d * d;
  AlgebraMatrix b = AlgebraMatrix::zero(spec, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = std::sqrt(a(i, j));
      for (int c = 0; c < dd; ++c) b.layers[std::size_t(c)](i, j) = g.normal() * s;
    }
  AlgebraElement c = cdet_bruteforce(spec, b);
  // Trace-form norm scaled by 1/d, so that E numerator = d^n per A.
  double num = norm_sq(spec, c) / double(d);
  double den = std::pow(double(d), double(n));
  return {num, den, num / den, seed};
}

MonteCarloValue c_constant_estimate(int d, int n, std::uint64_t seed, std::int64_t n_samples,
                                    CConstantMode mode) {
  if (d < 1) throw std::invalid_argument("c_constant_estimate: d >= 1 required");
  if (n < 1) throw std::invalid_argument("c_constant_estimate: n >= 1 required");
  if (n_samples < 2) throw std::invalid_argument("c_constant_estimate: need at least 2 samples");
  if (mode == CConstantMode::DirectProduct && n > 6)
    throw std::invalid_argument("c_constant_estimate: direct mode needs n <= 6 (n!-time)");

  std::vector<double> values(static_cast<std::size_t>(n_samples));
  int dd = d * d;
  if (mode == CConstantMode::DirectProduct) {
    const SignedPermutations& sp = signed_permutations(n);
    std::vector<std::vector<double>> y(static_cast<std::size_t>(n),
                                   std::vector<double>(static_cast<std::size_t>(dd)));
    const std::size_t zlen = static_cast<std::size_t>(dd);
    std::vector<double> z(zlen), prod(zlen), next(zlen);
    for (std::int64_t s = 0; s < n_samples; ++s) {
      SampleStream g(seed, std::uint64_t(s));
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dd; ++c) y[std::size_t(i)][std::size_t(c)] = g.normal();
      std::fill(z.begin(), z.end(), 0.0);
      for (const auto& perm : sp.perms) {
        prod = y[std::size_t(perm[0])];
        for (int i = 1; i < n; ++i) {
          const auto& m = y[std::size_t(perm[std::size_t(i)])];
          for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) {
              double v = 0.0;
              for (int t = 0; t < d; ++t)
                v += prod[std::size_t(p * d + t)] * m[std::size_t(t * d + q)];
              next[std::size_t(p * d + q)] = v;
            }
          std::swap(prod, next);
        }
        for (int c = 0; c < dd; ++c) z[std::size_t(c)] += prod[std::size_t(c)];
      }
      double inv = 1.0 / factorial(n);
      double norm = 0.0;
      for (int c = 0; c < dd; ++c) {
        double v = z[std::size_t(c)] * inv;
        norm += v * v;
      }
      values[std::size_t(s)] = norm;
    }
  } else {
    AlgebraSpec spec = builtin_algebra(BuiltinAlgebra::MatrixAlgebra, d);
    UTable table(spec, n);
    for (std::int64_t s = 0; s < n_samples; ++s) {
      SampleStream g(seed, std::uint64_t(s));
      AlgebraMatrix e = AlgebraMatrix::zero(spec, n);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < dd; ++c) e.layers[std::size_t(c)](i, i) = g.normal();
      values[std::size_t(s)] = norm_sq(spec, sdet(spec, e, table));
    }
  }
  MeanSe ms = mean_and_se(values);
  return {ms.mean, ms.se, ms.count};
}

double digamma_half_integer(int twice_x) {
  if (twice_x < 1) throw std::invalid_argument("digamma_half_integer: argument must be positive");
  if (twice_x % 2 == 0) {
    int m = twice_x / 2;
    double v = -kEulerGamma;
    for (int k = 1; k < m; ++k) v += 1.0 / double(k);
    return v;
  }
  int m = (twice_x - 1) / 2;
  double v = -kEulerGamma - 2.0 * std::log(2.0);
  for (int k = 1; k <= m; ++k) v += 2.0 / double(2 * k - 1);
  return v;
}

double concentration_constant(int d) {
  if (d < 1) throw std::invalid_argument("concentration_constant: d >= 1 required");
  return (2.0 / double(d)) * std::exp(digamma_half_integer(d));
}

MonteCarloValue concentration_log_mc(int d, std::int64_t n_draws, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("concentration_log_mc: d >= 1 required");
  if (n_draws < 2) throw std::invalid_argument("concentration_log_mc: need at least 2 draws");
  // Streaming mean/variance; a draw vector of size 10^7 would be wasteful.
  double mean = 0.0, m2 = 0.0;
  SampleStream g(seed);
  for (std::int64_t i = 0; i < n_draws; ++i) {
    double chi2 = 0.0;
    for (int c = 0; c < d; ++c) {
      double x = g.normal();
      chi2 += x * x;
    }
    double v = std::log(chi2 / double(d));
    double delta = v - mean;
    mean += delta / double(i + 1);
    m2 += delta * (v - mean);
  }
  double var = m2 / double(n_draws - 1);
  return {mean, std::sqrt(var / double(n_draws)), n_draws};
}

}  // namespace permest
