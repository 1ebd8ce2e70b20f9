#include "tracial/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tracial/errors.hpp"

namespace tracial::pencil {

namespace {

// Orders reported for errors that are exact to rounding.
constexpr double kExactOrder = 99.0;

HermitianMatrix block_diag(const HermitianMatrix& x, const HermitianMatrix& y) {
  const int n1 = x.dim();
  const int n2 = y.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = x.matrix();
  m.bottomRightCorner(n2, n2) = y.matrix();
  return HermitianMatrix(std::move(m));
}

ComplexVector smallest_singular_vector(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  ComplexVector v = svd.matrixV().col(m.cols() - 1);
  return v / v.norm();
}

Complex big_eigenvalue(const ComplexMatrix& m) {
  const auto spec = linalg::eig_general(m);
  Complex best = 0.0;
  for (const Complex& z : spec.values)
    if (std::abs(z) > std::abs(best)) best = z;
  return best;
}

struct Cluster {
  std::vector<std::size_t> members;
};

}  // namespace

HermitianPair::HermitianPair(HermitianMatrix a, HermitianMatrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.dim() != b_.dim() || a_.dim() == 0)
    throw Error(ErrorCode::DimensionMismatch, "pair matrices must share a positive dimension");
  norm_a_ = linalg::op_norm(a_);
  norm_b_ = linalg::op_norm(b_);
}

HermitianPair HermitianPair::transformed(double v11, double v12, double v21, double v22) const {
  return HermitianPair(a_.combine(v11, b_, v12), a_.combine(v21, b_, v22));
}

HermitianPair HermitianPair::conjugated(const ComplexMatrix& u) const {
  return HermitianPair(a_.conjugated(u), b_.conjugated(u));
}

HermitianPair HermitianPair::direct_sum(const HermitianPair& other) const {
  return HermitianPair(block_diag(a_, other.a_), block_diag(b_, other.b_));
}

ProjectivePoint ProjectivePoint::normalized(Complex a, Complex b) {
  const double norm = std::hypot(std::abs(a), std::abs(b));
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "projective point (0 : 0)");
  a /= norm;
  b /= norm;
  // The first coordinate counts as zero only below rounding level.
  const Complex lead = std::abs(a) > 1e-12 ? a : b;
  const Complex phase = std::conj(lead) / std::abs(lead);
  a *= phase;
  b *= phase;
  if (std::abs(a) > 1e-12)
    a = Complex(a.real(), 0.0);
  else
    b = Complex(b.real(), 0.0);
  return {a, b};
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  return std::abs(p.a * q.b - q.a * p.b);
}

double distance_to_real(const ProjectivePoint& p) {
  // Height above the great circle of real points on the Riemann sphere.
  const double y = std::min(1.0, 2.0 * std::abs((p.b * std::conj(p.a)).imag()));
  return std::sin(0.5 * std::asin(y));
}

PencilAnalysis analyze(const HermitianPair& pair, const AnalyzeOptions& opts) {
  const int n = pair.dim();
  const double scale = std::max(pair.norm_a(), pair.norm_b());
  PencilAnalysis out;

  // Pick the grid direction where cos(t)A + sin(t)B is best conditioned.
  double best_sigma = -1.0;
  double best_angle = 0.0;
  const double offset = 0.0137;
  for (int k = 0; k < opts.angle_grid; ++k) {
    const double t = offset + std::numbers::pi * k / opts.angle_grid;
    const auto ev = linalg::eigvals_hermitian(pair.combination(std::cos(t), std::sin(t)));
    double sigma = std::abs(ev.front());
    for (double v : ev) sigma = std::min(sigma, std::abs(v));
    if (sigma > best_sigma) {
      best_sigma = sigma;
      best_angle = t;
    }
  }
  if (!(scale > 0.0) || best_sigma <= 1e-12 * scale)
    throw Error(ErrorCode::DegeneratePencil, "no linear combination of A and B is invertible");
  out.nondegenerate = true;
  out.pivot_angle = best_angle;

  const double c = std::cos(best_angle);
  const double s = std::sin(best_angle);
  const ComplexMatrix pivot = pair.combination(c, s).matrix();
  const ComplexMatrix other = pair.combination(s, -c).matrix();
  const auto mu = linalg::eig_general(linalg::solve(pivot, other)).values;

  std::vector<ProjectivePoint> raw;
  raw.reserve(mu.size());
  for (const Complex& m : mu) raw.push_back(ProjectivePoint::normalized(c + m * s, s - m * c));

  // Single-linkage clustering under the chordal metric.
  std::vector<std::size_t> parent(raw.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      if (chordal_distance(raw[i], raw[j]) < opts.merge_tol) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<std::ptrdiff_t> cluster_of(raw.size(), -1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t r = find(i);
    if (cluster_of[r] < 0) {
      cluster_of[r] = static_cast<std::ptrdiff_t>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<std::size_t>(cluster_of[r])].members.push_back(i);
  }

  const double real_threshold = opts.real_tol * (1.0 + pair.norm_a() + pair.norm_b());
  for (const Cluster& cl : clusters) {
    // Average the members after aligning phases with the first one.
    Complex sa = 0.0, sb = 0.0;
    const ProjectivePoint& ref = raw[cl.members.front()];
    for (std::size_t idx : cl.members) {
      const ProjectivePoint& p = raw[idx];
      const Complex overlap = std::conj(ref.a) * p.a + std::conj(ref.b) * p.b;
      const Complex align = std::abs(overlap) > 0 ? std::conj(overlap) / std::abs(overlap) : 1.0;
      sa += p.a * align;
      sb += p.b * align;
    }
    PencilRoot root;
    root.homog = ProjectivePoint::normalized(sa, sb);
    root.multiplicity = static_cast<int>(cl.members.size());
    root.is_real = distance_to_real(root.homog) <= real_threshold;
    if (root.is_real) root.homog = ProjectivePoint::normalized(root.homog.a.real(), root.homog.b.real());
    if (root.multiplicity == 1) {
      const ComplexMatrix m = root.homog.b * pair.a().matrix() - root.homog.a * pair.b().matrix();
      root.eigenvector = smallest_singular_vector(m);
    }
    out.roots.push_back(std::move(root));
  }

  // Deterministic order: real roots first, then by angle of the direction.
  std::stable_sort(out.roots.begin(), out.roots.end(), [](const PencilRoot& x, const PencilRoot& y) {
    if (x.is_real != y.is_real) return x.is_real;
    const double tx = std::atan2(x.homog.b.real(), x.homog.a.real());
    const double ty = std::atan2(y.homog.b.real(), y.homog.a.real());
    if (tx != ty) return tx < ty;
    return x.homog.b.imag() < y.homog.b.imag();
  });

  out.distinct_real_roots = true;
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const PencilRoot& r = out.roots[i];
    if (r.is_real && r.multiplicity > 1) out.distinct_real_roots = false;
    if (r.is_real && r.eigenvector) {
      const ComplexVector& v = *r.eigenvector;
      const double alpha = (v.adjoint() * pair.a().matrix() * v)(0, 0).real();
      const double beta = (v.adjoint() * pair.b().matrix() * v)(0, 0).real();
      out.singular_points.push_back({alpha, beta, i});
    }
    for (std::size_t j = i + 1; j < out.roots.size(); ++j)
      out.min_root_separation = std::min(out.min_root_separation, chordal_distance(r.homog, out.roots[j].homog));
  }
  (void)n;
  return out;
}

double kippenhahn(const HermitianPair& pair, double x, double y, double z) {
  const int n = pair.dim();
  ComplexMatrix m = x * pair.a().matrix() + y * pair.b().matrix();
  m.diagonal().array() += z;
  const auto ev = linalg::eigvals_hermitian(HermitianMatrix::symmetrized(m));
  double det = 1.0;
  for (int i = 0; i < n; ++i) det *= ev[static_cast<std::size_t>(i)];
  return det;
}

double fitted_order(std::span<const double> offsets, std::span<const double> errors) {
  const std::size_t m = std::min(offsets.size(), errors.size());
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(offsets[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(m);
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

VerificationReport eigen_dynamics_check(const HermitianPair& pair, const PencilRoot& root,
                                        std::span<const double> offsets, const DynamicsOptions& opts) {
  if (root.multiplicity > 1 || !root.eigenvector)
    throw Error(ErrorCode::RepeatedRealRoot, "eigenvalue dynamics need a simple root");
  if (!root.is_real) throw Error(ErrorCode::InvalidArgument, "eigenvalue dynamics need a real root");
  const int n = pair.dim();
  const auto [a0, b0] = root.real_direction();
  // Rotate so the root sits at (1 : 0): B' = b0 A - a0 B is singular with kernel v.
  const HermitianPair rotated = pair.transformed(a0, b0, b0, -a0);
  const ComplexVector& v = *root.eigenvector;
  const double alpha = (v.adjoint() * rotated.a().matrix() * v)(0, 0).real();
  if (std::abs(alpha) <= 1e-14 * (1.0 + pair.norm_sum()))
    throw Error(ErrorCode::InvalidArgument, "<Av, v> vanishes at the root");
  const double a = opts.a_over_alpha * alpha;

  std::vector<double> used2, err2, used1, err1;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (double b : offsets) {
    const ComplexMatrix c2 = linalg::solve(rotated.pencil_at(a, b).matrix(), id);
    const ComplexMatrix c1 =
        (id - (a * rotated.a().matrix() + b * rotated.b().matrix()) / (a * a + b * b)) * c2;
    const Complex big2 = big_eigenvalue(c2);
    const Complex big1 = big_eigenvalue(c1);
    const double pred2 = 1.0 / (b * alpha);
    const double pred1 = (a - alpha) / (a * b * alpha);
    const double e2 = std::abs(big2 - pred2) / std::abs(pred2);
    const double e1 = std::abs(big1 - pred1) / std::abs(pred1);
    if (e2 > opts.exact_floor) {
      used2.push_back(b);
      err2.push_back(e2);
    }
    if (e1 > opts.exact_floor) {
      used1.push_back(b);
      err1.push_back(e1);
    }
  }
  const double order2 = used2.size() >= 2 ? fitted_order(used2, err2) : kExactOrder;
  const double order1 = used1.size() >= 2 ? fitted_order(used1, err1) : kExactOrder;
  const double need2 = 0.9;
  const double need1 = 0.9 / n;
  const double shortfall = std::max(need2 - std::min(order2, kExactOrder), need1 - std::min(order1, kExactOrder));

  auto report = VerificationReport::upper_bound("eigen_dynamics", shortfall, 0.0, 0.0);
  report.note("order_c2", order2).note("order_c1", order1);
  report.note("required_c2", need2).note("required_c1", need1);
  report.note("alpha", alpha).note("a", a);
  return report;
}

}  // namespace tracial::pencil
