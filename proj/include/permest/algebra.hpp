#pragma once

#include <string>
#include <utility>
#include <vector>

#include "permest/multilinear.hpp"

namespace permest {

// Element of a finite-dimensional real algebra, as coefficients in the
// basis e_1..e_r of its AlgebraSpec.
struct AlgebraElement {
  std::vector<double> coeffs;

  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<double> c) : coeffs(std::move(c)) {}
  explicit AlgebraElement(int r) : coeffs(std::size_t(r), 0.0) {}

  int dim() const { return int(coeffs.size()); }
  double operator[](int k) const { return coeffs[std::size_t(k)]; }
  double& operator[](int k) { return coeffs[std::size_t(k)]; }

  bool is_zero() const;
  void axpy(double s, const AlgebraElement& x);  // *this += s * x
  void scale(double s);

  bool operator==(const AlgebraElement& other) const = default;
};

struct AssociativityReport {
  double max_violation = 0.0;
  int worst_a = -1, worst_b = -1, worst_c = -1;
  bool pass = false;
};

inline constexpr double kAssociativityTol = 1e-9;

// Finite-dimensional associative real algebra described by structure
// constants: e_i e_j = sum_k beta(i,j,k) e_k. Immutable after construction
// and safe to share across threads.
class AlgebraSpec {
 public:
  int r() const { return r_; }
  const std::string& name() const { return name_; }

  double beta(int i, int j, int k) const {
    return beta_[(std::size_t(i) * r_ + j) * r_ + k];
  }
  const std::vector<double>& beta_flat() const { return beta_; }

  AlgebraElement zero() const { return AlgebraElement(r_); }
  AlgebraElement basis_element(int i) const;

 private:
  AlgebraSpec(int r, std::vector<double> beta, std::string name)
      : r_(r), beta_(std::move(beta)), name_(std::move(name)) {}
  friend AlgebraSpec make_algebra(int, const std::vector<double>&, std::string);

  int r_;
  std::vector<double> beta_;  // (i*r + j)*r + k
  std::string name_;
};

// Associativity residual of a raw structure-constant table: max over basis
// triples (a,b,c) and output coordinates of (e_a e_b) e_c - e_a (e_b e_c).
AssociativityReport check_associativity(int r, const std::vector<double>& beta_flat);
AssociativityReport check_associativity(const AlgebraSpec& spec);

// Validates dimensions and associativity (tolerance 1e-9); throws
// std::invalid_argument on a bad table.
AlgebraSpec make_algebra(int r, const std::vector<double>& beta_flat, std::string name);

enum class BuiltinAlgebra { Reals, Complexes, Quaternions, MatrixAlgebra };

// Built-in algebras. MatrixAlgebra uses the elementary-matrix basis E_pq
// (index p*d + q), so the coordinate scalar product equals Tr(a b^T).
AlgebraSpec builtin_algebra(BuiltinAlgebra kind, int d = 0);

// "reals", "complexes", "quaternions", "mat<d>" (e.g. "mat2").
AlgebraSpec algebra_by_name(const std::string& name);

// Parses {"r": int, "beta": [[[float]]], "name": str}.
AlgebraSpec algebra_from_json(const std::string& json_text);

AlgebraElement multiply(const AlgebraSpec& spec, const AlgebraElement& a, const AlgebraElement& b);
// a * e_i, the common inner step when building product tables.
AlgebraElement multiply_basis(const AlgebraSpec& spec, const AlgebraElement& a, int i);
// Coordinate scalar product <a,a>; for mat<d> this is Tr(a a^T).
double norm_sq(const AlgebraSpec& spec, const AlgebraElement& a);

// n x n matrix over an algebra, stored as r scalar coefficient layers:
// entry(i,j) = sum_k layers[k](i,j) e_k.
struct AlgebraMatrix {
  int n = 0;
  std::vector<Matrix> layers;

  static AlgebraMatrix zero(const AlgebraSpec& spec, int n);
  static AlgebraMatrix from_entries(const AlgebraSpec& spec,
                                    const std::vector<std::vector<AlgebraElement>>& entries);

  AlgebraElement entry(int i, int j) const;
};

// Parses {"algebra": name, "n": int, "layers": [[[float]]]}.
std::pair<AlgebraSpec, AlgebraMatrix> algebra_matrix_from_json(const std::string& json_text);

}  // namespace permest
