#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tracial::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

bool all_finite(const ComplexMatrix& m);

/// Square complex matrix whose stored entries satisfy m(i,j) == conj(m(j,i))
/// exactly. Ingestion code that starts from noisy data goes through
/// `symmetrized`; the checked constructor rejects anything else.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(ComplexMatrix m);

  static HermitianMatrix symmetrized(const ComplexMatrix& m);
  static HermitianMatrix zero(int n);
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  /// x*this + y*other; real coefficients keep exact conjugate symmetry.
  HermitianMatrix combine(double x, const HermitianMatrix& other, double y) const;
  /// U * this * U^*, re-symmetrized to remove rounding asymmetry.
  HermitianMatrix conjugated(const ComplexMatrix& u) const;

 private:
  ComplexMatrix m_;
};

struct Spectrum {
  std::vector<Complex> values;
  bool hermitian = false;

  std::size_t size() const { return values.size(); }
};

struct HermitianEigensystem {
  Spectrum spectrum;       // ascending real eigenvalues
  ComplexMatrix vectors;   // column i pairs with spectrum.values[i]

  std::vector<double> real_values() const;
};

HermitianEigensystem eig_hermitian(const HermitianMatrix& m);

/// Eigenvalues only, ascending.
std::vector<double> eigvals_hermitian(const HermitianMatrix& m);

Spectrum eig_general(const ComplexMatrix& m);

/// Reusable workspace for repeated eigenvalue computations of same-size
/// matrices in hot loops (density evaluation).
class GeneralEigenvalueSolver {
 public:
  explicit GeneralEigenvalueSolver(int n);
  /// Eigenvalues of m; the span stays valid until the next call.
  std::span<const Complex> compute(const ComplexMatrix& m);

 private:
  Eigen::ComplexEigenSolver<ComplexMatrix> solver_;
  std::vector<Complex> values_;
};

/// Solves m * x = rhs by partial-pivot LU. Throws SingularMatrix when the
/// estimated reciprocal condition number drops below 100 ulp.
ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);
double op_norm(const HermitianMatrix& m);

std::vector<double> singular_values(const ComplexMatrix& m);

/// (sum_i s_i^p)^{1/p} over singular values.
double schatten_norm(const ComplexMatrix& m, double p);

/// Largest pairwise distance under the minimum-cost perfect matching of the
/// two multisets (cost = absolute distance). Sizes must agree.
double matched_distance(std::span<const Complex> a, std::span<const Complex> b);
bool multisets_match(std::span<const Complex> a, std::span<const Complex> b, double tol);

/// Default matching tolerance 1e-8 * (1 + ||M||).
inline double default_match_tolerance(double norm) { return 1e-8 * (1.0 + norm); }

}  // namespace tracial::linalg
