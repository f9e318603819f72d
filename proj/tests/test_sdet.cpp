#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <complex>

#include "permest/algebra.hpp"
#include "permest/rng.hpp"
#include "permest/sdet.hpp"

using namespace permest;

namespace {

AlgebraMatrix gaussian_algebra_matrix(const AlgebraSpec& spec, int n, std::uint64_t seed) {
  SampleStream g(seed);
  AlgebraMatrix m = AlgebraMatrix::zero(spec, n);
  for (int k = 0; k < spec.r(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.layers[std::size_t(k)](i, j) = g.normal();
  return m;
}

void check_coeff_close(const AlgebraElement& got, const AlgebraElement& want, double rel) {
  REQUIRE(got.dim() == want.dim());
  double scale = 0.0;
  for (int k = 0; k < want.dim(); ++k) scale = std::max(scale, std::abs(want[k]));
  scale = std::max(scale, 1e-6);
  for (int k = 0; k < want.dim(); ++k) CHECK(std::abs(got[k] - want[k]) <= rel * scale);
}

}  // namespace

TEST_CASE("u-table base values over the complex numbers") {
  AlgebraSpec c = builtin_algebra(BuiltinAlgebra::Complexes);
  UTable t(c, 2);
  CHECK(t.at(Composition({1, 1})).coeffs == std::vector<double>{0.0, 2.0});   // 1*i + i*1 = 2i
  CHECK(t.at(Composition({0, 2})).coeffs == std::vector<double>{-1.0, 0.0});  // i*i
  CHECK(t.at(Composition({2, 0})).coeffs == std::vector<double>{1.0, 0.0});
}

TEST_CASE("u-table cancellation in the quaternions: ij + ji = 0") {
  AlgebraSpec h = builtin_algebra(BuiltinAlgebra::Quaternions);
  UTable t(h, 2);
  CHECK(t.at(Composition({0, 1, 1, 0})).is_zero());
}

TEST_CASE("u-table closed form over the complex numbers") {
  // u(k1,k2) = C(n, k2) i^k2 exactly, for every composition with n <= 8.
  AlgebraSpec c = builtin_algebra(BuiltinAlgebra::Complexes);
  for (int n = 1; n <= 8; ++n) {
    UTable t(c, n);
    for (const Composition& k : t.level_compositions(n)) {
      int k2 = k.parts[1];
      double mag = binomial(n, k2);
      double re[4] = {1.0, 0.0, -1.0, 0.0};
      double im[4] = {0.0, 1.0, 0.0, -1.0};
      const AlgebraElement& u = t.at(k);
      CHECK(u[0] == mag * re[k2 % 4]);
      CHECK(u[1] == mag * im[k2 % 4]);
    }
  }
}

TEST_CASE("u-table entries satisfy the defining recursion") {
  // Recompute every entry of total >= 2 from the previous level.
  for (const char* name : {"complexes", "quaternions", "mat2"}) {
    AlgebraSpec spec = algebra_by_name(name);
    int n = 4;
    UTable t(spec, n);
    for (int m = 2; m <= n; ++m) {
      for (const Composition& k : t.level_compositions(m)) {
        AlgebraElement expect(spec.r());
        for (int i = 0; i < spec.r(); ++i) {
          if (k.parts[std::size_t(i)] == 0) continue;
          std::vector<int> prev = k.parts;
          --prev[std::size_t(i)];
          expect.axpy(1.0, multiply_basis(spec, t.at(Composition(prev)), i));
        }
        check_coeff_close(t.at(k), expect, 1e-9);
      }
    }
  }
}

TEST_CASE("sdet over the reals is the scalar determinant") {
  AlgebraSpec re = builtin_algebra(BuiltinAlgebra::Reals);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    AlgebraMatrix b = gaussian_algebra_matrix(re, 6, seed);
    AlgebraElement s = sdet(re, b);
    CHECK(s[0] == determinant(b.layers[0]));  // same elimination, same bits
  }
}

TEST_CASE("sdet of a 1x1 matrix is its entry") {
  for (const char* name : {"reals", "complexes", "quaternions", "mat2"}) {
    AlgebraSpec spec = algebra_by_name(name);
    AlgebraMatrix b = gaussian_algebra_matrix(spec, 1, 99);
    AlgebraElement s = sdet(spec, b);
    CHECK(s == b.entry(0, 0));
  }
}

TEST_CASE("pinned quaternion 2x2: sdet differs from the Cayley determinant") {
  AlgebraSpec h = builtin_algebra(BuiltinAlgebra::Quaternions);
  // [[i, j], [k, 1]]
  AlgebraMatrix b = AlgebraMatrix::from_entries(
      h, {{h.basis_element(1), h.basis_element(2)}, {h.basis_element(3), h.basis_element(0)}});
  AlgebraElement s = sdet(h, b);
  CHECK(s.coeffs == std::vector<double>{0.0, 1.0, 0.0, 0.0});  // i
  AlgebraElement sb = sdet_bruteforce(h, b);
  CHECK(sb.coeffs == std::vector<double>{0.0, 1.0, 0.0, 0.0});
  // Cdet = i*1 - j*k = i - i = 0.
  AlgebraElement cd = cdet_bruteforce(h, b);
  CHECK(cd.is_zero());
}

TEST_CASE("sdet matches the definition-level oracle") {
  for (const char* name : {"reals", "complexes", "quaternions", "mat2"}) {
    AlgebraSpec spec = algebra_by_name(name);
    std::uint64_t seed = 1000;
    for (int n = 1; n <= 4; ++n) {
      UTable t(spec, n);
      for (int rep = 0; rep < 5; ++rep) {
        AlgebraMatrix b = gaussian_algebra_matrix(spec, n, seed++);
        check_coeff_close(sdet(spec, b, t), sdet_bruteforce(spec, b), 1e-9);
      }
    }
  }
}

TEST_CASE("commutative collapse: sdet, cdet and the expanded determinant agree") {
  AlgebraSpec re = builtin_algebra(BuiltinAlgebra::Reals);
  AlgebraMatrix br = gaussian_algebra_matrix(re, 4, 7);
  AlgebraElement s = sdet(re, br);
  AlgebraElement c = cdet_bruteforce(re, br);
  double d = determinant(br.layers[0]);
  CHECK(s[0] == doctest::Approx(d).epsilon(1e-12));
  CHECK(c[0] == doctest::Approx(d).epsilon(1e-12));

  AlgebraSpec cx = builtin_algebra(BuiltinAlgebra::Complexes);
  AlgebraMatrix bc = gaussian_algebra_matrix(cx, 3, 8);
  AlgebraElement sc = sdet(cx, bc);
  AlgebraElement cc = cdet_bruteforce(cx, bc);
  // Scalar determinant of the same matrix viewed over C.
  std::vector<std::complex<double>> z(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      z[std::size_t(i) * 3 + j] = {bc.layers[0](i, j), bc.layers[1](i, j)};
  std::complex<double> dz = complex_determinant(std::move(z), 3);
  CHECK(sc[0] == doctest::Approx(dz.real()).epsilon(1e-10));
  CHECK(sc[1] == doctest::Approx(dz.imag()).epsilon(1e-10));
  check_coeff_close(cc, sc, 1e-10);
}

TEST_CASE("sdet is multilinear in rows") {
  AlgebraSpec h = builtin_algebra(BuiltinAlgebra::Quaternions);
  AlgebraMatrix b = gaussian_algebra_matrix(h, 3, 55);
  AlgebraElement base = sdet(h, b);
  for (double t : {0.0, 2.0, -1.0}) {
    AlgebraMatrix scaled = b;
    for (auto& layer : scaled.layers)
      for (int j = 0; j < 3; ++j) layer(1, j) *= t;
    AlgebraElement got = sdet(h, scaled);
    AlgebraElement want = base;
    want.scale(t);
    check_coeff_close(got, want, 1e-12);
  }
}

TEST_CASE("swapping two rows negates sdet") {
  for (const char* name : {"quaternions", "mat2"}) {
    AlgebraSpec spec = algebra_by_name(name);
    AlgebraMatrix b = gaussian_algebra_matrix(spec, 4, 66);
    AlgebraMatrix swapped = b;
    for (auto& layer : swapped.layers)
      for (int j = 0; j < 4; ++j) std::swap(layer(0, j), layer(2, j));
    AlgebraElement s = sdet(spec, b);
    AlgebraElement t = sdet(spec, swapped);
    for (int k = 0; k < spec.r(); ++k) CHECK(t[k] == -s[k]);
  }
}

TEST_CASE("sdet of a matrix with a zero row vanishes") {
  AlgebraSpec m2 = builtin_algebra(BuiltinAlgebra::MatrixAlgebra, 2);
  AlgebraMatrix b = gaussian_algebra_matrix(m2, 3, 77);
  for (auto& layer : b.layers)
    for (int j = 0; j < 3; ++j) layer(2, j) = 0.0;
  CHECK(sdet(m2, b).is_zero());
  CHECK(sdet_bruteforce(m2, b).is_zero());
  CHECK(cdet_bruteforce(m2, b).is_zero());
}

TEST_CASE("cdet over the reals is the scalar determinant; size guards hold") {
  AlgebraSpec re = builtin_algebra(BuiltinAlgebra::Reals);
  AlgebraMatrix b = gaussian_algebra_matrix(re, 4, 88);
  CHECK(cdet_bruteforce(re, b)[0] == doctest::Approx(determinant(b.layers[0])).epsilon(1e-12));
  AlgebraMatrix one = gaussian_algebra_matrix(re, 1, 89);
  CHECK(cdet_bruteforce(re, one) == one.entry(0, 0));

  CHECK_THROWS_AS(sdet_bruteforce(re, gaussian_algebra_matrix(re, 6, 90)), std::invalid_argument);
  CHECK_THROWS_AS(cdet_bruteforce(re, gaussian_algebra_matrix(re, 9, 91)), std::invalid_argument);
}

TEST_CASE("sdet runtime grows polynomially (soft bound, non-gating)") {
  AlgebraSpec m2 = builtin_algebra(BuiltinAlgebra::MatrixAlgebra, 2);
  auto time_sdet = [&](int n) {
    AlgebraMatrix b = gaussian_algebra_matrix(m2, n, std::uint64_t(500 + n));
    UTable t(m2, n);
    sdet(m2, b, t);  // warm up
    auto t0 = std::chrono::steady_clock::now();
    int reps = n <= 6 ? 20 : 4;
    for (int rep = 0; rep < reps; ++rep) sdet(m2, b, t);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
           double(reps);
  };
  double t6 = time_sdet(6);
  double t12 = time_sdet(12);
  // Doubling n at r=4 should cost far less than 2^(r+4).
  WARN(t12 / std::max(t6, 1e-9) < 256.0);
  CHECK(t12 > 0.0);
}

TEST_CASE("sdet rejects mismatched layers and tables") {
  AlgebraSpec h = builtin_algebra(BuiltinAlgebra::Quaternions);
  AlgebraSpec c = builtin_algebra(BuiltinAlgebra::Complexes);
  AlgebraMatrix b = gaussian_algebra_matrix(h, 2, 92);
  CHECK_THROWS_AS(sdet(c, b), std::invalid_argument);
  UTable t3(h, 3);
  CHECK_THROWS_AS(sdet(h, b, t3), std::invalid_argument);
}
