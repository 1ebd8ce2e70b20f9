#include "tracial/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracial/errors.hpp"

namespace tracial::linalg {

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix must be square and non-empty");
}

// Hungarian algorithm (potentials form), cost is n x n row-major.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, 0);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "HermitianMatrix");
  require_finite(m_, "HermitianMatrix");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = i; j < m_.cols(); ++j)
      if (m_(i, j) != std::conj(m_(j, i)))
        throw Error(ErrorCode::NotHermitian, "entries are not exactly conjugate-symmetric");
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  require_square(m, "symmetrized");
  require_finite(m, "symmetrized");
  ComplexMatrix h(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    h(i, i) = Complex(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return HermitianMatrix(std::move(h));
}

HermitianMatrix HermitianMatrix::zero(int n) { return HermitianMatrix(ComplexMatrix::Zero(n, n)); }

HermitianMatrix HermitianMatrix::identity(int n) { return HermitianMatrix(ComplexMatrix::Identity(n, n)); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::combine(double x, const HermitianMatrix& other, double y) const {
  if (other.dim() != dim()) throw Error(ErrorCode::DimensionMismatch, "combine: dimensions differ");
  ComplexMatrix r(m_.rows(), m_.cols());
  for (Eigen::Index j = 0; j < m_.cols(); ++j)
    for (Eigen::Index i = 0; i < m_.rows(); ++i) r(i, j) = x * m_(i, j) + y * other.m_(i, j);
  return HermitianMatrix(std::move(r));
}

HermitianMatrix HermitianMatrix::conjugated(const ComplexMatrix& u) const {
  return symmetrized(u * m_ * u.adjoint());
}

std::vector<double> HermitianEigensystem::real_values() const {
  std::vector<double> out;
  out.reserve(spectrum.values.size());
  for (const Complex& z : spectrum.values) out.push_back(z.real());
  return out;
}

HermitianEigensystem eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver failed");
  HermitianEigensystem out;
  out.spectrum.hermitian = true;
  out.spectrum.values.reserve(static_cast<std::size_t>(m.dim()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.spectrum.values.emplace_back(es.eigenvalues()(i), 0.0);
  out.vectors = es.eigenvectors();
  return out;
}

std::vector<double> eigvals_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver failed");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

Spectrum eig_general(const ComplexMatrix& m) {
  require_square(m, "eig_general");
  require_finite(m, "eig_general");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration cap exceeded");
  Spectrum out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

GeneralEigenvalueSolver::GeneralEigenvalueSolver(int n) : solver_(n), values_(static_cast<std::size_t>(n)) {}

std::span<const Complex> GeneralEigenvalueSolver::compute(const ComplexMatrix& m) {
  solver_.compute(m, false);
  if (solver_.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration cap exceeded");
  const auto& ev = solver_.eigenvalues();
  values_.assign(ev.data(), ev.data() + ev.size());
  return values_;
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& rhs) {
  require_square(m, "solve");
  require_finite(m, "solve");
  require_finite(rhs, "solve");
  if (rhs.rows() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: row counts differ");
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double rcond = lu.rcond();
  constexpr double threshold = 100.0 * std::numeric_limits<double>::epsilon();
  if (!(rcond >= threshold))
    throw Error(ErrorCode::SingularMatrix, "reciprocal condition estimate " + std::to_string(rcond));
  return lu.solve(rhs);
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

double op_norm(const HermitianMatrix& m) {
  const auto ev = eigvals_hermitian(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double schatten_norm(const ComplexMatrix& m, double p) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidP, "Schatten exponent must be positive");
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0.0;
  // Factor out the largest singular value to keep large p finite.
  const double top = s.front();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double matched_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "multisets differ in size");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i * n + j] = std::abs(a[i] - b[j]);
  const auto assign = min_cost_assignment(cost, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, cost[i * n + assign[i]]);
  return worst;
}

bool multisets_match(std::span<const Complex> a, std::span<const Complex> b, double tol) {
  return a.size() == b.size() && matched_distance(a, b) <= tol;
}

}  // namespace tracial::linalg
