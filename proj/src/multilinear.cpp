#include "permest/multilinear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "permest/stats.hpp"

namespace permest {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(std::size_t(rows) * std::size_t(cols), fill) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimensions");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad CSV cell '" + cell + "' in " + path);
      }
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite CSV entry in " + path);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty CSV matrix: " + path);
  Matrix m(int(rows.size()), int(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
}

namespace {

constexpr double kNullPivot = 1e-300;

template <class T>
T lu_det(std::vector<T>& a, int n) {
  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[std::size_t(col) * n + col]);
    for (int i = col + 1; i < n; ++i) {
      double v = std::abs(a[std::size_t(i) * n + col]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < kNullPivot) return T(0);
    if (piv != col) {
      for (int j = col; j < n; ++j)
        std::swap(a[std::size_t(piv) * n + j], a[std::size_t(col) * n + j]);
      sign = -sign;
    }
    T pivot = a[std::size_t(col) * n + col];
    for (int i = col + 1; i < n; ++i) {
      T m = a[std::size_t(i) * n + col] / pivot;
      if (m == T(0)) continue;
      for (int j = col + 1; j < n; ++j) a[std::size_t(i) * n + j] -= m * a[std::size_t(col) * n + j];
    }
  }
  T det(sign);
  for (int i = 0; i < n; ++i) det *= a[std::size_t(i) * n + i];
  return det;
}

void require_square(const Matrix& m, const char* who) {
  if (!m.square()) throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
}

}  // namespace

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  thread_local std::vector<double> scratch;
  scratch.assign(m.data().begin(), m.data().end());
  return lu_det<double>(scratch, m.rows());
}

std::complex<double> complex_determinant(std::vector<std::complex<double>> rowmajor, int n) {
  if (n <= 0 || rowmajor.size() != std::size_t(n) * std::size_t(n))
    throw std::invalid_argument("complex_determinant: bad dimensions");
  return lu_det<std::complex<double>>(rowmajor, n);
}

double permanent_naive(const Matrix& m) {
  require_square(m, "permanent_naive");
  int n = m.rows();
  if (n > 10) throw std::invalid_argument("permanent_naive: n <= 10 (factorial-time oracle)");
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  CompensatedSum sum;
  do {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= m(i, p[std::size_t(i)]);
    sum.add(prod);
  } while (std::next_permutation(p.begin(), p.end()));
  return sum.value();
}

double permanent_ryser(const Matrix& m) {
  require_square(m, "permanent_ryser");
  int n = m.rows();
  if (n > 30) throw std::invalid_argument("permanent_ryser: n <= 30 (2^n-time oracle)");
  std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
  CompensatedSum total;
  std::uint64_t prev_gray = 0;
  const std::uint64_t count = 1ull << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    std::uint64_t gray = k ^ (k >> 1);
    std::uint64_t diff = gray ^ prev_gray;
    int j = std::countr_zero(diff);
    double s = (gray & diff) ? 1.0 : -1.0;  // column j enters or leaves
    for (int i = 0; i < n; ++i) rowsum[std::size_t(i)] += s * m(i, j);
    prev_gray = gray;
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[std::size_t(i)];
    total.add((std::popcount(gray) & 1) ? -prod : prod);
  }
  double v = total.value();
  return ((n % 2) ? -v : v) + 0.0;  // normalizes -0.0
}

namespace {

constexpr int kPascalMax = 64;

const std::vector<double>& pascal_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(std::size_t(kPascalMax + 1) * (kPascalMax + 1), 0.0);
    for (int n = 0; n <= kPascalMax; ++n) {
      t[std::size_t(n) * (kPascalMax + 1)] = 1.0;
      for (int k = 1; k <= n; ++k)
        t[std::size_t(n) * (kPascalMax + 1) + k] =
            t[std::size_t(n - 1) * (kPascalMax + 1) + k - 1] +
            (k <= n - 1 ? t[std::size_t(n - 1) * (kPascalMax + 1) + k] : 0.0);
    }
    return t;
  }();
  return table;
}

}  // namespace

double binomial(int n, int k) {
  if (n < 0 || n > kPascalMax) throw std::invalid_argument("binomial: n out of range");
  if (k < 0 || k > n) return 0.0;
  return pascal_table()[std::size_t(n) * (kPascalMax + 1) + k];
}

double factorial(int n) {
  if (n < 0 || n > 170) throw std::invalid_argument("factorial: n out of range");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

Composition::Composition(std::vector<int> p) : parts(std::move(p)) {
  for (int v : parts) {
    if (v < 0) throw std::invalid_argument("Composition: negative part");
    total += v;
  }
}

std::vector<Composition> compositions_of(int total, int count) {
  if (count < 1) throw std::invalid_argument("compositions_of: need at least one part");
  if (total < 0) throw std::invalid_argument("compositions_of: negative total");
  std::vector<Composition> out;
  std::vector<int> cur(static_cast<std::size_t>(count), 0);
  // Colex ascending: the last coordinate is the most significant.
  auto gen = [&](auto&& self, int remaining, int idx) -> void {
    if (idx == 0) {
      cur[0] = remaining;
      out.push_back(Composition(cur));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[std::size_t(idx)] = v;
      self(self, remaining - v, idx - 1);
    }
  };
  gen(gen, total, count - 1);
  return out;
}

const SignedPermutations& signed_permutations(int n) {
  if (n < 0 || n > 10) throw std::invalid_argument("signed_permutations: n <= 10");
  static std::mutex mu;
  static std::vector<SignedPermutations> cache(11);
  std::lock_guard<std::mutex> lock(mu);
  SignedPermutations& entry = cache[std::size_t(n)];
  if (entry.perms.empty() && n >= 0) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
      int inversions = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (p[std::size_t(i)] > p[std::size_t(j)]) ++inversions;
      entry.perms.push_back(p);
      entry.signs.push_back((inversions & 1) ? -1 : 1);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return entry;
}

double mixed_discriminant_bruteforce(std::span<const Matrix> ms) {
  int n = int(ms.size());
  if (n < 1) throw std::invalid_argument("mixed_discriminant_bruteforce: empty list");
  if (n > 6) throw std::invalid_argument("mixed_discriminant_bruteforce: n <= 6 ((n!)^2-time oracle)");
  for (const Matrix& m : ms)
    if (!m.square() || m.rows() != n)
      throw std::invalid_argument("mixed_discriminant_bruteforce: need n matrices of size n x n");
  const SignedPermutations& sp = signed_permutations(n);
  CompensatedSum acc;
  for (std::size_t a = 0; a < sp.perms.size(); ++a) {
    for (std::size_t b = 0; b < sp.perms.size(); ++b) {
      double prod = 1.0;
      for (int k = 0; k < n; ++k)
        prod *= ms[std::size_t(k)](sp.perms[a][std::size_t(k)], sp.perms[b][std::size_t(k)]);
      acc.add(double(sp.signs[a] * sp.signs[b]) * prod);
    }
  }
  return acc.value() / factorial(n);
}

double mixed_discriminant(std::span<const Matrix> as, const Composition& k) {
  int r = int(as.size());
  if (r < 1) throw std::invalid_argument("mixed_discriminant: empty matrix list");
  if (k.size() != r)
    throw std::invalid_argument("mixed_discriminant: composition length must match matrix count");
  int n = as[0].rows();
  for (const Matrix& m : as)
    if (!m.square() || m.rows() != n)
      throw std::invalid_argument("mixed_discriminant: matrices must all be n x n");
  if (k.total != n)
    throw std::invalid_argument("mixed_discriminant: composition must sum to the matrix size");

  // One distinct matrix: D(A,...,A) = det A. Also dodges the catastrophic
  // cancellation the finite-difference sum develops at large n.
  if (r == 1) return determinant(as[0]);

  thread_local Matrix combo;
  combo = Matrix(n, n, 0.0);
  std::vector<int> m(static_cast<std::size_t>(r), 0);
  CompensatedSum acc;
  for (;;) {
    int msum = 0;
    double coeff = 1.0;
    for (int i = 0; i < r; ++i) {
      msum += m[std::size_t(i)];
      coeff *= binomial(k.parts[std::size_t(i)], m[std::size_t(i)]);
    }
    if (msum > 0) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int t = 0; t < r; ++t) v += double(m[std::size_t(t)]) * as[std::size_t(t)](i, j);
          combo(i, j) = v;
        }
      double term = coeff * determinant(combo);
      acc.add((msum & 1) ? -term : term);
    }
    // Odometer over 0 <= m_i <= k_i.
    int pos = 0;
    while (pos < r && m[std::size_t(pos)] == k.parts[std::size_t(pos)]) {
      m[std::size_t(pos)] = 0;
      ++pos;
    }
    if (pos == r) break;
    ++m[std::size_t(pos)];
  }
  double sign = (n % 2) ? -1.0 : 1.0;
  return sign * acc.value() / factorial(n);
}

}  // namespace permest
