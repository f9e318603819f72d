#pragma once

#include <unordered_map>
#include <vector>

#include "permest/algebra.hpp"
#include "permest/multilinear.hpp"

namespace permest {

// Table of the order-averaged basis products u(k_1..k_r): for a composition
// k of m, u(k) is the sum of e_{phi(1)} ... e_{phi(m)} over all arrangements
// phi with part multiplicities k. Built bottom-up from
//   u(k) = sum over i with k_i > 0 of u(k - delta_i) e_i,
// for all totals 1..n. The table depends only on the algebra and n, so it
// is built once and reused across every matrix (and every Monte Carlo
// sample) over that algebra.
class UTable {
 public:
  UTable(const AlgebraSpec& spec, int n);

  int n() const { return n_; }
  int r() const { return r_; }

  const std::vector<Composition>& level_compositions(int m) const { return comps_[std::size_t(m)]; }
  const AlgebraElement& value(int m, int index) const { return values_[std::size_t(m)][std::size_t(index)]; }
  const AlgebraElement& at(const Composition& k) const;

 private:
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };

  int n_ = 0;
  int r_ = 0;
  std::vector<std::vector<Composition>> comps_;                       // per total
  std::vector<std::unordered_map<std::vector<int>, int, VecHash>> rank_;  // parts -> index
  std::vector<std::vector<AlgebraElement>> values_;
};

inline UTable u_table(const AlgebraSpec& spec, int n) { return UTable(spec, n); }

// Symmetrized determinant of B via the composition expansion
//   sdet B = sum over compositions k of n of D(layers; k) u(k).
// Polynomial in n for fixed algebra dimension. Compositions whose u-element
// vanishes identically skip their mixed-discriminant evaluation.
AlgebraElement sdet(const AlgebraSpec& spec, const AlgebraMatrix& b, const UTable& table);
AlgebraElement sdet(const AlgebraSpec& spec, const AlgebraMatrix& b);

// Definition-level oracle: (1/n!) sum over permutation pairs (sigma, tau)
// of signed products b_{sigma(1)tau(1)} ... b_{sigma(n)tau(n)}, multiplied
// left to right. n <= 5.
AlgebraElement sdet_bruteforce(const AlgebraSpec& spec, const AlgebraMatrix& b);

// Row-ordered Cayley determinant sum_sigma sgn(sigma) b_{1 sigma(1)} ...
// b_{n sigma(n)}; coincides with sdet over commutative algebras only.
// n <= 8.
AlgebraElement cdet_bruteforce(const AlgebraSpec& spec, const AlgebraMatrix& b);

}  // namespace permest
