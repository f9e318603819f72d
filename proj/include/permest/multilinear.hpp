#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace permest {

// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// CSV: one row per line, comma-separated decimal floats, dimensions inferred.
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const Matrix& m, const std::string& path);

// det via Gaussian elimination with partial pivoting. A numerically null
// pivot column (all candidates below 1e-300 in absolute value) yields an
// exact 0.
double determinant(const Matrix& m);

// Same elimination over complex entries; used for complexified matrices.
std::complex<double> complex_determinant(std::vector<std::complex<double>> rowmajor, int n);

// Exact factorial-time oracle, n <= 10.
double permanent_naive(const Matrix& m);

// Inclusion-exclusion permanent with Gray-code subset updates, n <= 30.
double permanent_ryser(const Matrix& m);

// Pascal-recurrence binomial coefficient; exact while values stay below 2^53.
double binomial(int n, int k);
double factorial(int n);

// Ordered tuple of non-negative integers with a fixed sum.
struct Composition {
  std::vector<int> parts;
  int total = 0;

  Composition() = default;
  explicit Composition(std::vector<int> p);

  int size() const { return int(parts.size()); }
  bool operator==(const Composition& other) const { return parts == other.parts; }
};

// All compositions of `total` into `count` parts, colexicographic order
// (first (total,0,...,0), last (0,...,0,total)). The order is fixed so
// downstream reductions and reports are byte-stable.
std::vector<Composition> compositions_of(int total, int count);

// Permutations of {0..n-1} with their signs, in lexicographic order.
struct SignedPermutations {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};
const SignedPermutations& signed_permutations(int n);  // cached, n <= 10

// Definition-level oracle: (1/n!) sum over permutation pairs of signed
// diagonal products; n <= 6.
double mixed_discriminant_bruteforce(std::span<const Matrix> ms);

// Mixed discriminant of k_1 copies of as[0], ..., k_r copies of as[r-1]
// via finite differences of det(m_1 A_1 + ... + m_r A_r). Alternating sum
// accumulated in compensated arithmetic. The single-matrix case collapses
// to det(as[0]).
double mixed_discriminant(std::span<const Matrix> as, const Composition& k);

}  // namespace permest
