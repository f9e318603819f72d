#pragma once

#include <cstdint>
#include <string>

#include "permest/algebra.hpp"
#include "permest/multilinear.hpp"
#include "permest/rng.hpp"
#include "permest/sdet.hpp"
#include "permest/stats.hpp"

namespace permest {

enum class DistKind {
  Rademacher,          // +-1 with probability 1/2
  RealGaussian,        // N(0,1)
  CubeRoots,           // cubic roots of unity, probability 1/3 each
  ComplexGaussian,     // (g1 + i g2)/sqrt(2)
  QuaternionGaussian,  // (g0 + g1 i + g2 j + g3 k)/2
  MatrixGaussian,      // d x d matrix with i.i.d. N(0,1) entries
};

// Entry distribution for the randomized estimators. All kinds are centered
// with unit second moment per entry (E x = 0 and E |x|^2 = 1 for the scalar
// kinds), which is what makes the estimators unbiased.
struct DistributionKind {
  DistKind tag = DistKind::RealGaussian;
  int d = 1;  // MatrixGaussian only

  bool scalar_like() const { return tag != DistKind::MatrixGaussian; }
};

// Names used by the CLI and config files: "gg-rademacher", "gg-real-gauss",
// "gg-cube-roots", "gg-complex-gauss", "gg-quaternion".
DistributionKind distribution_from_name(const std::string& name);

struct EstimatorSample {
  double numerator = 0.0;
  double denominator = 1.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

// Empirical zero-mean check for a distribution kind (used by `selftest`):
// the mean over all drawn scalar components must stay within 4 sigma/sqrt(N).
struct MeanCheck {
  double mean = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;
  std::int64_t components = 0;
  bool pass = false;
};
MeanCheck distribution_mean_check(const DistributionKind& kind, std::int64_t n_draws,
                                  std::uint64_t seed);

// det of the complexification of a quaternionic matrix (4 layers = 1,i,j,k).
// The result is provably real and non-negative; tiny negative round-off
// (within 1e-9 of the determinant scale) is clamped to 0, anything worse
// throws.
double study_determinant(const AlgebraMatrix& q);

// Classical determinant estimator of the permanent: B = (u_ij sqrt(a_ij))
// with i.i.d. draws, alpha = (det B)^2 for real kinds, |det B|^2 for complex
// kinds, and the Study determinant for the quaternionic kind. E alpha =
// per A; denominator is identically 1.
EstimatorSample gg_estimate(const Matrix& a, const DistributionKind& kind,
                            std::uint64_t sample_seed);

// Symmetrized-determinant estimator over mat<d>. Holds the algebra and the
// u-table so that repeated sampling amortizes everything that does not
// depend on the draws.
class SdetEstimator {
 public:
  SdetEstimator(int n, int d);

  // One sample: B = (u_ij sqrt(a_ij)) with u_ij i.i.d. standard Gaussian
  // d x d matrices; E reuses the same diagonal draws u_ii (or fresh ones in
  // independent-denominator mode, drawn after B's). numerator = |sdet B|^2,
  // denominator = |sdet E|^2, alpha = numerator/denominator.
  EstimatorSample sample(const Matrix& a, std::uint64_t sample_seed,
                         bool independent_denominator = false) const;

  int n() const { return n_; }
  int d() const { return d_; }
  const AlgebraSpec& spec() const { return spec_; }
  const UTable& table() const { return table_; }

 private:
  int n_;
  int d_;
  AlgebraSpec spec_;
  UTable table_;
};

EstimatorSample sdet_estimate(const Matrix& a, int d, std::uint64_t sample_seed);

// Cayley-determinant reference estimator (factorial time, n <= 8). Same B
// construction and draw order as the sdet estimator; numerator is the
// trace-form norm Tr(C C^T)/d of C = Cdet B, denominator d^n, so that
// E numerator = d^n per A and E alpha = per A.
EstimatorSample cdet_estimate(const Matrix& a, int d, std::uint64_t sample_seed);

struct MonteCarloValue {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t samples = 0;
};

enum class CConstantMode {
  DirectProduct,  // Z = (1/n!) sum_sigma Y_sigma(1) ... Y_sigma(n); n <= 6
  DiagonalSdet,   // |sdet diag(Y_1..Y_n)|^2 through the sdet engine; any n
};

// Monte Carlo estimate of the normalization constant c(n) = E |Z|^2 for
// mat<d> with i.i.d. standard Gaussian entries. The two modes are
// independent routes to the same constant.
MonteCarloValue c_constant_estimate(int d, int n, std::uint64_t seed, std::int64_t n_samples,
                                    CConstantMode mode = CConstantMode::DirectProduct);

// Concentration constant exp{E ln(chi^2_d / d)} in closed form,
// (2/d) exp(psi(d/2)); psi at integer and half-integer points reduces to
// harmonic-type sums.
double concentration_constant(int d);
double digamma_half_integer(int twice_x);

// Monte Carlo mean of ln(chi^2_d / d), for cross-checking the closed form.
MonteCarloValue concentration_log_mc(int d, std::int64_t n_draws, std::uint64_t seed);

}  // namespace permest
