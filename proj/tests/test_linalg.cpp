#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"

#include "tracial/errors.hpp"
#include "tracial/linalg.hpp"

using namespace tracial;
using namespace tracial::linalg;

namespace {

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner.
std::vector<Complex> oracle_eigenvalues(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  std::vector<Complex> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4, 0.9), i);
  auto poly = [&](Complex x) {
    Complex s = 0.0;
    for (int k = n; k >= 0; --k) s = s * x + c[k];
    return s;
  };
  for (int it = 0; it < 2000; ++it)
    for (int i = 0; i < n; ++i) {
      Complex den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= poly(z[i]) / den;
    }
  return z;
}

}  // namespace

TEST_CASE("hermitian construction rejects asymmetry and symmetrizes on request") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(2.0, 1.0), Complex(2.0, -1.0), 3.0;
  CHECK_NOTHROW(HermitianMatrix{m});
  ComplexMatrix bad = m;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(HermitianMatrix{bad}, Error);
  const auto h = HermitianMatrix::symmetrized(bad);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
}

TEST_CASE("eig_hermitian returns ascending eigenpairs") {
  const double d[] = {3.0, -1.0, 2.0};
  const auto sys = eig_hermitian(HermitianMatrix::diagonal(d));
  const auto vals = sys.real_values();
  CHECK(vals == std::vector<double>{-1.0, 2.0, 3.0});
  const auto h = HermitianMatrix::symmetrized(random_matrix(5, 3));
  const auto e = eig_hermitian(h);
  for (int i = 0; i < 5; ++i) {
    const ComplexVector v = e.vectors.col(i);
    CHECK((h.matrix() * v - e.spectrum.values[static_cast<std::size_t>(i)] * v).norm() < 1e-12);
  }
}

TEST_CASE("eig_general matches the characteristic polynomial") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix a = random_matrix(4, seed);
    const auto spec = eig_general(a);
    const auto ref = oracle_eigenvalues(a);
    CHECK(multisets_match(spec.values, ref, 1e-9));
  }
}

TEST_CASE("solve flags singular systems") {
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(solve(m, ComplexMatrix::Identity(2, 2)), Error);
  const ComplexMatrix a = random_matrix(3, 9);
  const ComplexMatrix x = solve(a, ComplexMatrix::Identity(3, 3));
  CHECK((a * x - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("norms from singular values") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 3.0;
  m(1, 0) = Complex(0.0, -4.0);
  const auto s = singular_values(m);
  CHECK(s[0] == doctest::Approx(4.0));
  CHECK(s[1] == doctest::Approx(3.0));
  CHECK(op_norm(m) == doctest::Approx(4.0));
  CHECK(schatten_norm(m, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(m, 1.0) == doctest::Approx(7.0));
}

TEST_CASE("matched distance pairs values optimally") {
  const std::vector<Complex> a{1.0, Complex(0, 1), -2.0};
  const std::vector<Complex> b{-2.0 + 1e-9, 1.0, Complex(0, 1)};
  CHECK(matched_distance(a, b) < 2e-9);
  CHECK(multisets_match(a, b, 1e-8));
  const std::vector<Complex> c{1.0, 1.0, -2.0};
  CHECK_FALSE(multisets_match(a, c, 1e-3));
}
