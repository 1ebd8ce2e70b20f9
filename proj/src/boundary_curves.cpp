#include "boundary_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tracial::measure::detail {

namespace {

using linalg::ComplexMatrix;

constexpr int kInitialIntervals = 256;
constexpr double kMinStep = 1e-9;
constexpr double kMinOverlap = 0.9;
constexpr int kRefineSteps = 6;

ComplexMatrix eigenvectors_at(const ComplexMatrix& a, const ComplexMatrix& b, double psi) {
  const ComplexMatrix q = std::cos(psi) * a + std::sin(psi) * b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(q, Eigen::ComputeEigenvectors);
  return es.eigenvectors();
}

// Greedy column matching of w to the columns of v by largest overlap.
// Returns the permuted copy of w and the smallest overlap used.
std::pair<ComplexMatrix, double> match(const ComplexMatrix& v, const ComplexMatrix& w) {
  const int n = static_cast<int>(v.cols());
  const Eigen::MatrixXd overlap = (v.adjoint() * w).cwiseAbs();
  std::vector<char> row_used(static_cast<std::size_t>(n), 0), col_used(static_cast<std::size_t>(n), 0);
  ComplexMatrix out(n, n);
  double worst = 1.0;
  for (int step = 0; step < n; ++step) {
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < n; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    row_used[static_cast<std::size_t>(bi)] = col_used[static_cast<std::size_t>(bj)] = 1;
    out.col(bi) = w.col(bj);
    worst = std::min(worst, best);
  }
  return {out, worst};
}

// Column of w closest to the unit vector v.
int closest_column(const ComplexMatrix& w, const linalg::ComplexVector& v) {
  int best = 0;
  double top = -1.0;
  for (int j = 0; j < w.cols(); ++j) {
    const double o = std::abs(v.dot(w.col(j)));
    if (o > top) {
      top = o;
      best = j;
    }
  }
  return best;
}

}  // namespace

BoundaryCurves BoundaryCurves::build(const pencil::HermitianPair& pair) {
  BoundaryCurves c;
  c.n = pair.dim();
  c.a = pair.a().matrix();
  c.b = pair.b().matrix();
  const double scale = std::max(pair.norm_sum(), 1e-300);
  const double move_tol = 2e-3 * scale;

  auto push = [&](double psi, const ComplexMatrix& v) {
    c.psi.push_back(psi);
    c.vectors.push_back(v);
    for (int i = 0; i < c.n; ++i) {
      c.alpha.push_back((v.col(i).adjoint() * c.a * v.col(i))(0, 0).real());
      c.beta.push_back((v.col(i).adjoint() * c.b * v.col(i))(0, 0).real());
    }
  };
  auto moved = [&](const ComplexMatrix& v) {
    const std::size_t base = (c.psi.size() - 1) * static_cast<std::size_t>(c.n);
    double worst = 0.0;
    for (int i = 0; i < c.n; ++i) {
      const double al = (v.col(i).adjoint() * c.a * v.col(i))(0, 0).real();
      const double be = (v.col(i).adjoint() * c.b * v.col(i))(0, 0).real();
      worst = std::max(worst, std::hypot(al - c.alpha[base + static_cast<std::size_t>(i)],
                                         be - c.beta[base + static_cast<std::size_t>(i)]));
    }
    return worst;
  };

  push(0.0, eigenvectors_at(c.a, c.b, 0.0));
  for (int k = 1; k <= kInitialIntervals; ++k) {
    const double target = std::numbers::pi * k / kInitialIntervals;
    while (c.psi.back() < target) {
      const double cur = c.psi.back();
      double next = target;
      while (true) {
        auto [v, overlap] = match(c.vectors.back(), eigenvectors_at(c.a, c.b, next));
        if ((overlap >= kMinOverlap && moved(v) <= move_tol) || next - cur <= kMinStep) {
          push(next, v);
          break;
        }
        next = 0.5 * (cur + next);
      }
    }
  }
  return c;
}

void BoundaryCurves::ray_crossings(double theta, std::vector<double>& out) const {
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const std::size_t nn = static_cast<std::size_t>(n);
  auto side = [&](double al, double be) { return al * sn - be * cs; };
  auto radius = [&](double al, double be) { return al * cs + be * sn; };

  for (std::size_t k = 0; k + 1 < psi.size(); ++k) {
    for (std::size_t i = 0; i < nn; ++i) {
      const double a0 = alpha[k * nn + i], b0 = beta[k * nn + i];
      const double a1 = alpha[(k + 1) * nn + i], b1 = beta[(k + 1) * nn + i];
      double g0 = side(a0, b0);
      double g1 = side(a1, b1);
      if ((g0 < 0.0) == (g1 < 0.0)) continue;
      const double t = g0 / (g0 - g1);
      double r = radius(a0 + t * (a1 - a0), b0 + t * (b1 - b0));
      if (r <= 0.0) continue;

      // Illinois iteration on the exact curve between the two samples.
      const linalg::ComplexVector ref = vectors[k].col(static_cast<Eigen::Index>(i));
      double lo = psi[k], hi = psi[k + 1];
      double glo = g0, ghi = g1;
      int last = 0;
      for (int it = 0; it < kRefineSteps && hi - lo > 1e-15; ++it) {
        const double mid = (lo * ghi - hi * glo) / (ghi - glo);
        if (!(mid > lo && mid < hi)) break;
        const ComplexMatrix w = eigenvectors_at(a, b, mid);
        const auto v = w.col(closest_column(w, ref));
        const double al = (v.adjoint() * a * v)(0, 0).real();
        const double be = (v.adjoint() * b * v)(0, 0).real();
        const double g = side(al, be);
        r = radius(al, be);
        if (g == 0.0) break;
        if ((g < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = g;
          if (last == -1) ghi *= 0.5;
          last = -1;
        } else {
          hi = mid;
          ghi = g;
          if (last == 1) glo *= 0.5;
          last = 1;
        }
      }
      if (r > 0.0) out.push_back(r);
    }
  }
}

}  // namespace tracial::measure::detail
