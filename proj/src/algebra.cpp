#include "permest/algebra.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace permest {

bool AlgebraElement::is_zero() const {
  for (double v : coeffs)
    if (v != 0.0) return false;
  return true;
}

void AlgebraElement::axpy(double s, const AlgebraElement& x) {
  if (x.dim() != dim()) throw std::invalid_argument("AlgebraElement::axpy: dimension mismatch");
  for (int i = 0; i < dim(); ++i) coeffs[std::size_t(i)] += s * x.coeffs[std::size_t(i)];
}

void AlgebraElement::scale(double s) {
  for (double& v : coeffs) v *= s;
}

AlgebraElement AlgebraSpec::basis_element(int i) const {
  if (i < 0 || i >= r_) throw std::invalid_argument("basis_element: index out of range");
  AlgebraElement e(r_);
  e[i] = 1.0;
  return e;
}

AssociativityReport check_associativity(int r, const std::vector<double>& beta) {
  if (r < 1) throw std::invalid_argument("check_associativity: r >= 1 required");
  if (beta.size() != std::size_t(r) * r * r)
    throw std::invalid_argument("check_associativity: beta must have r^3 entries");
  auto at = [&](int i, int j, int k) { return beta[(std::size_t(i) * r + j) * r + k]; };
  AssociativityReport rep;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int k = 0; k < r; ++k) {
          // (e_a e_b) e_c vs e_a (e_b e_c), coordinate k.
          double lhs = 0.0, rhs = 0.0;
          for (int m = 0; m < r; ++m) {
            lhs += at(a, b, m) * at(m, c, k);
            rhs += at(b, c, m) * at(a, m, k);
          }
          double viol = std::abs(lhs - rhs);
          if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.worst_a = a;
            rep.worst_b = b;
            rep.worst_c = c;
          }
        }
  rep.pass = rep.max_violation <= kAssociativityTol;
  return rep;
}

AssociativityReport check_associativity(const AlgebraSpec& spec) {
  return check_associativity(spec.r(), spec.beta_flat());
}

AlgebraSpec make_algebra(int r, const std::vector<double>& beta, std::string name) {
  if (r < 1) throw std::invalid_argument("make_algebra: r >= 1 required");
  if (beta.size() != std::size_t(r) * r * r)
    throw std::invalid_argument("make_algebra: beta must have exactly r^3 entries");
  for (double v : beta)
    if (!std::isfinite(v)) throw std::invalid_argument("make_algebra: non-finite structure constant");
  AssociativityReport rep = check_associativity(r, beta);
  if (!rep.pass)
    throw std::invalid_argument("make_algebra: structure constants are not associative (residual " +
                                std::to_string(rep.max_violation) + " at basis triple (" +
                                std::to_string(rep.worst_a) + "," + std::to_string(rep.worst_b) +
                                "," + std::to_string(rep.worst_c) + "))");
  return AlgebraSpec(r, beta, std::move(name));
}

namespace {

std::vector<double> zero_table(int r) {
  return std::vector<double>(std::size_t(r) * r * r, 0.0);
}

void set_beta(std::vector<double>& t, int r, int i, int j, int k, double v) {
  t[(std::size_t(i) * r + j) * r + k] = v;
}

}  // namespace

AlgebraSpec builtin_algebra(BuiltinAlgebra kind, int d) {
  switch (kind) {
    case BuiltinAlgebra::Reals: {
      std::vector<double> t = zero_table(1);
      set_beta(t, 1, 0, 0, 0, 1.0);
      return make_algebra(1, t, "reals");
    }
    case BuiltinAlgebra::Complexes: {
      // Basis (1, i).
      std::vector<double> t = zero_table(2);
      set_beta(t, 2, 0, 0, 0, 1.0);
      set_beta(t, 2, 0, 1, 1, 1.0);
      set_beta(t, 2, 1, 0, 1, 1.0);
      set_beta(t, 2, 1, 1, 0, -1.0);
      return make_algebra(2, t, "complexes");
    }
    case BuiltinAlgebra::Quaternions: {
      // Basis (1, i, j, k): i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
      std::vector<double> t = zero_table(4);
      auto mul = [&](int a, int b, int c, double s) { set_beta(t, 4, a, b, c, s); };
      for (int a = 0; a < 4; ++a) {
        mul(0, a, a, 1.0);
        if (a != 0) mul(a, 0, a, 1.0);
      }
      mul(1, 1, 0, -1.0);
      mul(2, 2, 0, -1.0);
      mul(3, 3, 0, -1.0);
      mul(1, 2, 3, 1.0);
      mul(2, 1, 3, -1.0);
      mul(2, 3, 1, 1.0);
      mul(3, 2, 1, -1.0);
      mul(3, 1, 2, 1.0);
      mul(1, 3, 2, -1.0);
      return make_algebra(4, t, "quaternions");
    }
    case BuiltinAlgebra::MatrixAlgebra: {
      if (d < 1) throw std::invalid_argument("builtin_algebra: mat<d> needs d >= 1");
      // Elementary-matrix basis E_pq (index p*d + q): E_pq E_st = [q==s] E_pt.
      int r = d * d;
      std::vector<double> t = zero_table(r);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          for (int s = 0; s < d; ++s)
            set_beta(t, r, p * d + q, q * d + s, p * d + s, 1.0);
      return make_algebra(r, t, "mat" + std::to_string(d));
    }
  }
  throw std::invalid_argument("builtin_algebra: unknown kind");
}

AlgebraSpec algebra_by_name(const std::string& name) {
  if (name == "reals") return builtin_algebra(BuiltinAlgebra::Reals);
  if (name == "complexes") return builtin_algebra(BuiltinAlgebra::Complexes);
  if (name == "quaternions") return builtin_algebra(BuiltinAlgebra::Quaternions);
  if (name.rfind("mat", 0) == 0 && name.size() > 3) {
    try {
      std::size_t pos = 0;
      int d = std::stoi(name.substr(3), &pos);
      if (pos == name.size() - 3 && d >= 1)
        return builtin_algebra(BuiltinAlgebra::MatrixAlgebra, d);
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("algebra_by_name: unknown algebra '" + name +
                              "' (expected reals, complexes, quaternions, or mat<d>)");
}

AlgebraSpec algebra_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("algebra_from_json: parse error: ") + e.what());
  }
  if (!j.contains("r") || !j.contains("beta"))
    throw std::invalid_argument("algebra_from_json: need fields r and beta");
  int r = j.at("r").get<int>();
  std::string name = j.value("name", std::string("custom"));
  const auto& b = j.at("beta");
  if (!b.is_array() || int(b.size()) != r)
    throw std::invalid_argument("algebra_from_json: beta must be an r x r x r array");
  std::vector<double> flat;
  flat.reserve(std::size_t(r) * r * r);
  for (const auto& bi : b) {
    if (!bi.is_array() || int(bi.size()) != r)
      throw std::invalid_argument("algebra_from_json: beta must be an r x r x r array");
    for (const auto& bij : bi) {
      if (!bij.is_array() || int(bij.size()) != r)
        throw std::invalid_argument("algebra_from_json: beta must be an r x r x r array");
      for (const auto& v : bij) flat.push_back(v.get<double>());
    }
  }
  return make_algebra(r, flat, std::move(name));
}

AlgebraElement multiply(const AlgebraSpec& spec, const AlgebraElement& a, const AlgebraElement& b) {
  int r = spec.r();
  if (a.dim() != r || b.dim() != r)
    throw std::invalid_argument("multiply: element dimension must equal the algebra dimension");
  AlgebraElement out(r);
  for (int i = 0; i < r; ++i) {
    double ai = a[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < r; ++j) {
      double s = ai * b[j];
      if (s == 0.0) continue;
      for (int k = 0; k < r; ++k) out[k] += s * spec.beta(i, j, k);
    }
  }
  return out;
}

AlgebraElement multiply_basis(const AlgebraSpec& spec, const AlgebraElement& a, int i) {
  int r = spec.r();
  if (a.dim() != r) throw std::invalid_argument("multiply_basis: dimension mismatch");
  if (i < 0 || i >= r) throw std::invalid_argument("multiply_basis: basis index out of range");
  AlgebraElement out(r);
  for (int j = 0; j < r; ++j) {
    double aj = a[j];
    if (aj == 0.0) continue;
    for (int k = 0; k < r; ++k) out[k] += aj * spec.beta(j, i, k);
  }
  return out;
}

double norm_sq(const AlgebraSpec& spec, const AlgebraElement& a) {
  if (a.dim() != spec.r()) throw std::invalid_argument("norm_sq: dimension mismatch");
  double s = 0.0;
  for (double v : a.coeffs) s += v * v;
  return s;
}

AlgebraMatrix AlgebraMatrix::zero(const AlgebraSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("AlgebraMatrix: n >= 1 required");
  AlgebraMatrix m;
  m.n = n;
  m.layers.assign(std::size_t(spec.r()), Matrix(n, n, 0.0));
  return m;
}

AlgebraMatrix AlgebraMatrix::from_entries(const AlgebraSpec& spec,
                                          const std::vector<std::vector<AlgebraElement>>& entries) {
  int n = int(entries.size());
  AlgebraMatrix m = zero(spec, n);
  for (int i = 0; i < n; ++i) {
    if (int(entries[std::size_t(i)].size()) != n)
      throw std::invalid_argument("AlgebraMatrix::from_entries: ragged rows");
    for (int j = 0; j < n; ++j) {
      const AlgebraElement& e = entries[std::size_t(i)][std::size_t(j)];
      if (e.dim() != spec.r())
        throw std::invalid_argument("AlgebraMatrix::from_entries: entry dimension mismatch");
      for (int k = 0; k < spec.r(); ++k) m.layers[std::size_t(k)](i, j) = e[k];
    }
  }
  return m;
}

AlgebraElement AlgebraMatrix::entry(int i, int j) const {
  AlgebraElement e(int(layers.size()));
  for (int k = 0; k < int(layers.size()); ++k) e[k] = layers[std::size_t(k)](i, j);
  return e;
}

std::pair<AlgebraSpec, AlgebraMatrix> algebra_matrix_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("algebra_matrix_from_json: parse error: ") + e.what());
  }
  if (!j.contains("algebra") || !j.contains("n") || !j.contains("layers"))
    throw std::invalid_argument("algebra_matrix_from_json: need fields algebra, n, layers");
  AlgebraSpec spec = algebra_by_name(j.at("algebra").get<std::string>());
  int n = j.at("n").get<int>();
  const auto& layers = j.at("layers");
  if (!layers.is_array() || int(layers.size()) != spec.r())
    throw std::invalid_argument("algebra_matrix_from_json: expected " + std::to_string(spec.r()) +
                                " layers for algebra " + spec.name());
  AlgebraMatrix m = AlgebraMatrix::zero(spec, n);
  for (int k = 0; k < spec.r(); ++k) {
    const auto& layer = layers[std::size_t(k)];
    if (!layer.is_array() || int(layer.size()) != n)
      throw std::invalid_argument("algebra_matrix_from_json: layer must be n x n");
    for (int i = 0; i < n; ++i) {
      const auto& row = layer[std::size_t(i)];
      if (!row.is_array() || int(row.size()) != n)
        throw std::invalid_argument("algebra_matrix_from_json: layer must be n x n");
      for (int jcol = 0; jcol < n; ++jcol)
        m.layers[std::size_t(k)](i, jcol) = row[std::size_t(jcol)].get<double>();
    }
  }
  return {std::move(spec), std::move(m)};
}

}  // namespace permest
