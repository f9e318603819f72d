#include "permest/sdet.hpp"

#include <stdexcept>

namespace permest {

std::size_t UTable::VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = 0x9E3779B97F4A7C15ull;
  for (int x : v) h = (h ^ std::size_t(x) * 0x100000001B3ull) * 0xC2B2AE3D27D4EB4Full;
  return h;
}

UTable::UTable(const AlgebraSpec& spec, int n) : n_(n), r_(spec.r()) {
  if (n < 1) throw std::invalid_argument("UTable: n >= 1 required");
  comps_.resize(std::size_t(n) + 1);
  rank_.resize(std::size_t(n) + 1);
  values_.resize(std::size_t(n) + 1);
  for (int m = 1; m <= n; ++m) {
    comps_[std::size_t(m)] = compositions_of(m, r_);
    auto& ranks = rank_[std::size_t(m)];
    auto& vals = values_[std::size_t(m)];
    const auto& comps = comps_[std::size_t(m)];
    ranks.reserve(comps.size());
    vals.reserve(comps.size());
    std::vector<int> prev(static_cast<std::size_t>(r_));
    for (int idx = 0; idx < int(comps.size()); ++idx) {
      const Composition& k = comps[std::size_t(idx)];
      ranks.emplace(k.parts, idx);
      AlgebraElement u(r_);
      if (m == 1) {
        for (int i = 0; i < r_; ++i)
          if (k.parts[std::size_t(i)] == 1) u = spec.basis_element(i);
      } else {
        for (int i = 0; i < r_; ++i) {
          if (k.parts[std::size_t(i)] == 0) continue;
          prev = k.parts;
          --prev[std::size_t(i)];
          const AlgebraElement& tail = values_[std::size_t(m - 1)][std::size_t(
              rank_[std::size_t(m - 1)].at(prev))];
          u.axpy(1.0, multiply_basis(spec, tail, i));
        }
      }
      vals.push_back(std::move(u));
    }
  }
}

const AlgebraElement& UTable::at(const Composition& k) const {
  if (k.size() != r_) throw std::invalid_argument("UTable::at: composition length mismatch");
  if (k.total < 1 || k.total > n_) throw std::invalid_argument("UTable::at: total out of range");
  auto it = rank_[std::size_t(k.total)].find(k.parts);
  if (it == rank_[std::size_t(k.total)].end())
    throw std::invalid_argument("UTable::at: composition not in table");
  return values_[std::size_t(k.total)][std::size_t(it->second)];
}

namespace {

void require_matrix(const AlgebraSpec& spec, const AlgebraMatrix& b, const char* who) {
  if (b.n < 1) throw std::invalid_argument(std::string(who) + ": n >= 1 required");
  if (int(b.layers.size()) != spec.r())
    throw std::invalid_argument(std::string(who) + ": layer count must equal the algebra dimension");
  for (const Matrix& layer : b.layers)
    if (layer.rows() != b.n || layer.cols() != b.n)
      throw std::invalid_argument(std::string(who) + ": layers must be n x n");
}

}  // namespace

AlgebraElement sdet(const AlgebraSpec& spec, const AlgebraMatrix& b, const UTable& table) {
  require_matrix(spec, b, "sdet");
  if (table.n() != b.n || table.r() != spec.r())
    throw std::invalid_argument("sdet: u-table was built for a different (algebra, n)");
  AlgebraElement res(spec.r());
  std::span<const Matrix> layers(b.layers);
  const auto& comps = table.level_compositions(b.n);
  for (int idx = 0; idx < int(comps.size()); ++idx) {
    const AlgebraElement& u = table.value(b.n, idx);
    if (u.is_zero()) continue;
    double dk = mixed_discriminant(layers, comps[std::size_t(idx)]);
    res.axpy(dk, u);
  }
  return res;
}

AlgebraElement sdet(const AlgebraSpec& spec, const AlgebraMatrix& b) {
  require_matrix(spec, b, "sdet");
  UTable table(spec, b.n);
  return sdet(spec, b, table);
}

AlgebraElement sdet_bruteforce(const AlgebraSpec& spec, const AlgebraMatrix& b) {
  require_matrix(spec, b, "sdet_bruteforce");
  int n = b.n;
  if (n > 5) throw std::invalid_argument("sdet_bruteforce: n <= 5 ((n!)^2-time oracle)");
  const SignedPermutations& sp = signed_permutations(n);
  AlgebraElement sum(spec.r());
  for (std::size_t a = 0; a < sp.perms.size(); ++a) {
    for (std::size_t t = 0; t < sp.perms.size(); ++t) {
      AlgebraElement prod = b.entry(sp.perms[a][0], sp.perms[t][0]);
      for (int i = 1; i < n; ++i)
        prod = multiply(spec, prod, b.entry(sp.perms[a][std::size_t(i)], sp.perms[t][std::size_t(i)]));
      sum.axpy(double(sp.signs[a] * sp.signs[t]), prod);
    }
  }
  sum.scale(1.0 / factorial(n));
  return sum;
}

AlgebraElement cdet_bruteforce(const AlgebraSpec& spec, const AlgebraMatrix& b) {
  require_matrix(spec, b, "cdet_bruteforce");
  int n = b.n;
  if (n > 8) throw std::invalid_argument("cdet_bruteforce: n <= 8 (n!-time oracle)");
  const SignedPermutations& sp = signed_permutations(n);
  AlgebraElement sum(spec.r());
  for (std::size_t s = 0; s < sp.perms.size(); ++s) {
    AlgebraElement prod = b.entry(0, sp.perms[s][0]);
    for (int i = 1; i < n; ++i) prod = multiply(spec, prod, b.entry(i, sp.perms[s][std::size_t(i)]));
    sum.axpy(double(sp.signs[s]), prod);
  }
  return sum;
}

}  // namespace permest
