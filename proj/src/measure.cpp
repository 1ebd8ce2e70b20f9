#include "tracial/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "boundary_curves.hpp"
#include "quadrature.hpp"
#include "tracial/errors.hpp"

namespace tracial::measure {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// |Im λ| at or below this many ulps of the matrix norm is rounding, not signal.
constexpr double kImagFloorUlps = 64.0;

// The matrices are H1 H2^{-1} with H1, H2 Hermitian, so the spectrum is closed
// under conjugation. A non-real eigenvalue without a conjugate partner is a
// perturbed real one (badly conditioned near singular lines) and counts as 0.
double sum_abs_imag(std::span<const linalg::Complex> ev, double norm) {
  const double floor = kImagFloorUlps * kEps * norm;
  std::vector<bool> used(ev.size(), false);
  double s = 0.0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double im = ev[i].imag();
    if (used[i] || !(im > floor)) continue;
    std::size_t best = ev.size();
    double best_gap = 0.5 * im;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (j == i || used[j]) continue;
      const double gap = std::abs(ev[j] - std::conj(ev[i]));
      if (gap <= best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best == ev.size()) continue;
    used[i] = used[best] = true;
    s += 2.0 * im;
  }
  return s;
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

void sort_unique(std::vector<double>& v, double gap) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > gap) out.push_back(x);
  v.swap(out);
}

// ∫₀¹ (1 - t)/t φ(t) dt through t = e^{-s}; `kinks` are t-values where φ is rough.
template <class Phi>
std::pair<double, double> segment_integral(Phi&& phi, std::vector<double> kinks) {
  std::vector<double> kink_s;
  for (double t : kinks)
    if (t > 0.0 && t < 1.0) kink_s.push_back(-std::log(t));
  std::sort(kink_s.begin(), kink_s.end());
  const double last_kink = kink_s.empty() ? 0.0 : kink_s.back();

  auto integrand = [&](double s, double* out) {
    const double t = std::exp(-s);
    out[0] = t > 0.0 ? -std::expm1(-s) * phi(t) : 0.0;
  };
  double sum = 0.0, err = 0.0;
  double lo = 0.0, hi = 1.0;
  while (lo < 1024.0) {
    std::vector<double> breaks{lo};
    for (double s : kink_s)
      if (s > lo && s < hi) breaks.push_back(s);
    breaks.push_back(hi);
    // Tail panels only need accuracy relative to the running sum.
    const double abs_floor[1] = {std::max(1e-300, 1e-15 * std::abs(sum))};
    const quad::Tolerance tol{abs_floor, 1e-14, false};
    const auto r = quad::integrate(integrand, breaks, 1, tol, {200, 50});
    sum += r.value[0];
    err += r.error[0];
    const bool small = std::abs(r.value[0]) <= 1e-16 * std::abs(sum);
    if (small && hi >= last_kink && sum != 0.0) break;
    lo = hi;
    hi *= 2.0;
  }
  return {sum, err};
}

}  // namespace

ComplexMatrix c1_matrix(const HermitianPair& pair, double a, double b) {
  if (a == 0.0 && b == 0.0) throw Error(ErrorCode::OriginUndefined, "C1 is undefined at the origin");
  const int n = pair.dim();
  const ComplexMatrix pencil = pair.pencil_at(a, b).matrix();
  const ComplexMatrix left =
      ComplexMatrix::Identity(n, n) - pair.combination(a, b).matrix() / (a * a + b * b);
  // X N = left  <=>  N^T X^T = left^T.
  return linalg::solve(pencil.transpose(), left.transpose()).transpose();
}

std::vector<SingularSegment> singular_segments(const HermitianPair& pair, const PencilAnalysis& analysis) {
  for (const auto& root : analysis.roots)
    if (root.is_real && root.multiplicity > 1)
      throw Error(ErrorCode::RepeatedRealRoot,
                  "real root of multiplicity " + std::to_string(root.multiplicity) +
                      "; perturb A or B by about 1e-5 * (||A|| + ||B||) = " +
                      std::to_string(1e-5 * pair.norm_sum()) + " to separate it");
  std::vector<SingularSegment> out;
  out.reserve(analysis.singular_points.size());
  for (const auto& sp : analysis.singular_points) out.push_back({sp.alpha, sp.beta, sp.root_index});
  return out;
}

TracialMeasure::TracialMeasure(HermitianPair pair, PencilAnalysis analysis)
    : pair_(std::move(pair)), analysis_(std::move(analysis)) {}

TracialMeasure TracialMeasure::build(const HermitianPair& pair, const pencil::AnalyzeOptions& opts) {
  TracialMeasure m(pair, pencil::analyze(pair, opts));
  m.segments_ = singular_segments(m.pair_, m.analysis_);
  m.support_radius_ = pair.norm_sum();
  if (pair.dim() >= 2) m.curves_ = std::make_shared<const detail::BoundaryCurves>(detail::BoundaryCurves::build(pair));
  for (const auto& root : m.analysis_.roots) {
    if (!root.is_real) continue;
    const auto [a, b] = root.real_direction();
    double t = std::atan2(b, a);
    if (t < 0.0) t += std::numbers::pi;
    if (t >= std::numbers::pi) t -= std::numbers::pi;
    m.singular_angles_.push_back(t);
  }
  return m;
}

double TracialMeasure::density(double a, double b) const {
  if (a == 0.0 && b == 0.0) throw Error(ErrorCode::OriginUndefined, "density is undefined at the origin");
  if (std::abs(a) + std::abs(b) > support_radius_) return 0.0;
  return density_formula(a, b);
}

double TracialMeasure::density_formula(double a, double b) const {
  if (a == 0.0 && b == 0.0) throw Error(ErrorCode::OriginUndefined, "density is undefined at the origin");
  ComplexMatrix c1;
  try {
    c1 = c1_matrix(pair_, a, b);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) return std::numeric_limits<double>::infinity();
    throw;
  }
  const auto spec = linalg::eig_general(c1);
  return sum_abs_imag(spec.values, c1.norm()) / kTwoPi;
}

// One integrand of a batch. Moments use r^(i+j+2) cos^i sin^j; everything
// else is f(r (x cos + y sin)).
struct TracialMeasure::Job {
  const FunctionSpec* f = nullptr;
  double x = 0.0;
  double y = 0.0;
  int mi = -1;
  int mj = -1;

  bool is_moment() const { return mi >= 0; }
};

namespace {

// Per-angle data of the polar form: at (a, b) = r (cos θ, sin θ),
// density · r = Σ |Im λ(rK - L)| / (2π r) with K = P^{-1}, L = Q K,
// Q = cos θ A + sin θ B and P = sin θ A - cos θ B.
struct AngleFrame {
  double cos_t = 1.0;
  double sin_t = 0.0;
  ComplexMatrix k;
  ComplexMatrix l;
  double norm_k = 0.0;
  double norm_l = 0.0;
  // The density vanishes off [r_lo, r_hi]: rI - Q is definite there.
  double r_lo = 0.0;
  double r_hi = 0.0;
};

bool make_frame(const HermitianPair& pair, double support, double theta, AngleFrame& fr) {
  fr.cos_t = std::cos(theta);
  fr.sin_t = std::sin(theta);
  const auto q = pair.combination(fr.cos_t, fr.sin_t);
  const auto qev = linalg::eigvals_hermitian(q);
  fr.r_lo = std::max(0.0, qev.front());
  fr.r_hi = std::min(qev.back(), support / (std::abs(fr.cos_t) + std::abs(fr.sin_t)));
  if (!(fr.r_hi > fr.r_lo)) return false;
  const int n = pair.dim();
  fr.k = linalg::solve(pair.combination(fr.sin_t, -fr.cos_t).matrix(), ComplexMatrix::Identity(n, n));
  fr.l = q.matrix() * fr.k;
  fr.norm_k = fr.k.norm();
  fr.norm_l = fr.l.norm();
  return true;
}

}  // namespace

std::vector<IntegrationResult> TracialMeasure::run(std::span<const Job> jobs, const QuadratureOptions& opts) const {
  const std::size_t m = jobs.size();
  std::vector<IntegrationResult> out(m);
  if (m == 0) return out;
  const int n = pair_.dim();

  // Singular part: one 1-D integral per (job, segment).
  std::vector<double> sing(m, 0.0), sing_err(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const Job& job = jobs[k];
    for (const auto& seg : segments_) {
      std::pair<double, double> r;
      if (job.is_moment()) {
        const int deg = job.mi + job.mj + 2;
        const double pref =
            std::pow(seg.alpha, job.mi) * std::pow(seg.beta, job.mj) * (seg.alpha * seg.alpha + seg.beta * seg.beta);
        if (pref == 0.0) continue;
        r = segment_integral([deg](double t) { return std::pow(t, deg); }, {});
        r.first *= pref;
        r.second *= std::abs(pref);
      } else {
        const double c = seg.alpha * job.x + seg.beta * job.y;
        std::vector<double> kinks;
        if (c != 0.0)
          for (double t : job.f->kinks()) kinks.push_back(t / c);
        const FunctionSpec& f = *job.f;
        r = segment_integral([&f, c](double t) { return f(c * t); }, std::move(kinks));
      }
      sing[k] += r.first;
      sing_err[k] += r.second;
    }
  }

  std::vector<double> cont(m, 0.0), cont_err(m, 0.0);
  std::vector<char> cont_ok(m, 1);
  std::size_t evaluations = 0;

  bool has_density = n >= 2;
  if (has_density) {
    // Angular breakpoints: singular lines and the lines where ax + by = 0.
    std::vector<double> breaks{0.0, kTwoPi};
    for (double t : singular_angles_) {
      breaks.push_back(t);
      breaks.push_back(t + std::numbers::pi);
    }
    for (const Job& job : jobs) {
      if (job.is_moment() || (job.x == 0.0 && job.y == 0.0)) continue;
      const double psi = std::atan2(job.y, job.x);
      breaks.push_back(wrap_angle(psi + 0.5 * std::numbers::pi));
      breaks.push_back(wrap_angle(psi + 1.5 * std::numbers::pi));
    }
    sort_unique(breaks, 1e-13);
    if (breaks.back() < kTwoPi - 1e-13) breaks.push_back(kTwoPi);

    std::vector<double> outer_abs(m), inner_abs(m);
    for (std::size_t k = 0; k < m; ++k) {
      outer_abs[k] = std::max(opts.abs_tol, opts.rel_tol * std::abs(sing[k]));
      inner_abs[k] = opts.inner_fraction * outer_abs[k] / kTwoPi;
    }
    const quad::Tolerance inner_tol{inner_abs, opts.inner_fraction * opts.rel_tol, true};
    const quad::Tolerance outer_tol{outer_abs, opts.rel_tol, false};
    const quad::Limits inner_limits{opts.max_radial_panels, 60};
    const quad::Limits outer_limits{opts.max_angular_panels, 60};

    linalg::GeneralEigenvalueSolver solver(n);
    AngleFrame fr;
    std::vector<double> coef(m);
    std::vector<char> inner_ok(m, 1);
    ComplexMatrix work(n, n);
    std::vector<double> crossings, sbreaks;
    std::vector<std::pair<double, double>> pieces;

    auto clamp_angle = [&](double theta) {
      for (double t : singular_angles_) {
        for (double line : {t, t + std::numbers::pi}) {
          const double d = theta - line;
          if (std::abs(d) < opts.line_exclusion) theta = line + (d < 0.0 ? -opts.line_exclusion : opts.line_exclusion);
        }
      }
      return theta;
    };

    auto angular = [&](double theta, double* res) {
      std::fill(res, res + m, 0.0);
      theta = clamp_angle(theta);
      bool ok = false;
      for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
        try {
          ok = make_frame(pair_, support_radius_, theta, fr);
          if (!ok) return;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::SingularMatrix) throw;
          theta += 8.0 * opts.line_exclusion;
        }
      }
      if (!ok) return;

      for (std::size_t k = 0; k < m; ++k) {
        const Job& job = jobs[k];
        if (job.is_moment())
          coef[k] = std::pow(fr.cos_t, job.mi) * std::pow(fr.sin_t, job.mj);
        else
          coef[k] = job.x * fr.cos_t + job.y * fr.sin_t;
      }

      // density(r) * r, already divided by 2π.
      auto weight = [&](double r) {
        work = r * fr.k - fr.l;
        const auto ev = solver.compute(work);
        const double s = sum_abs_imag(ev, r * fr.norm_k + fr.norm_l);
        return s / (kTwoPi * r);
      };
      auto value = [&](std::size_t k, double r) {
        const Job& job = jobs[k];
        if (job.is_moment()) return coef[k] * std::pow(r, job.mi + job.mj + 2);
        return (*job.f)(r * coef[k]);
      };

      // Radial breakpoints: boundary-curve crossings and kinks of f(r c).
      std::vector<double> rb{fr.r_lo, fr.r_hi};
      crossings.clear();
      curves_->ray_crossings(theta, crossings);
      for (double r : crossings)
        if (r > fr.r_lo && r < fr.r_hi) rb.push_back(r);
      for (std::size_t k = 0; k < m; ++k) {
        if (jobs[k].is_moment() || coef[k] == 0.0) continue;
        for (double t : jobs[k].f->kinks()) {
          const double r = t / coef[k];
          if (r > fr.r_lo && r < fr.r_hi) rb.push_back(r);
        }
      }
      sort_unique(rb, 1e-14 * fr.r_hi);

      // The number of non-real eigenvalues is constant between crossings, so
      // an interval whose midpoint carries no density carries none at all.
      pieces.clear();
      for (std::size_t i = 0; i + 1 < rb.size(); ++i)
        if (weight(0.5 * (rb[i] + rb[i + 1])) > 0.0) pieces.emplace_back(rb[i], rb[i + 1]);
      if (pieces.empty()) return;

      // Piece i is the image of s ∈ [i, i + 1] under r = lo + (hi - lo)(1 - cos πu)/2,
      // which turns square-root edges into smooth ones. A piece starting at the
      // origin squares that map to absorb the r^{-2} growth of the density there.
      auto mapped = [&](double s, double* o) {
        std::size_t i = std::min(static_cast<std::size_t>(s), pieces.size() - 1);
        const double u = s - static_cast<double>(i);
        const auto [lo, hi] = pieces[i];
        const double c = 0.5 * (1.0 - std::cos(std::numbers::pi * u));
        const double dc = 0.5 * std::numbers::pi * std::sin(std::numbers::pi * u);
        double r, jac;
        if (lo == 0.0) {
          r = hi * c * c;
          jac = hi * 2.0 * c * dc;
        } else {
          r = lo + (hi - lo) * c;
          jac = (hi - lo) * dc;
        }
        if (!(r > 0.0) || jac == 0.0) {
          std::fill(o, o + m, 0.0);
          return;
        }
        const double w = weight(r) * jac;
        for (std::size_t k = 0; k < m; ++k) o[k] = w == 0.0 ? 0.0 : w * value(k, r);
      };
      sbreaks.resize(pieces.size() + 1);
      for (std::size_t i = 0; i <= pieces.size(); ++i) sbreaks[i] = static_cast<double>(i);
      const auto r = quad::integrate(mapped, sbreaks, m, inner_tol, inner_limits);
      evaluations += r.evaluations;
      for (std::size_t k = 0; k < m; ++k) {
        res[k] = r.value[k];
        if (!r.converged[k]) inner_ok[k] = 0;
      }
    };


    const auto r = quad::integrate(angular, breaks, m, outer_tol, outer_limits);
    for (std::size_t k = 0; k < m; ++k) {
      cont[k] = r.value[k];
      cont_err[k] = r.error[k];
      cont_ok[k] = r.converged[k] && inner_ok[k];
    }
  }

  for (std::size_t k = 0; k < m; ++k) {
    auto& res = out[k];
    res.continuous = cont[k];
    res.singular = sing[k];
    res.value = cont[k] + sing[k];
    res.error = cont_err[k] + sing_err[k];
    res.evaluations = evaluations;
    const double goal = std::max(opts.abs_tol, opts.rel_tol * std::abs(res.value));
    res.converged = cont_ok[k] && sing_err[k] <= goal;
  }
  return out;
}

std::vector<IntegrationResult> TracialMeasure::integrate_batch(std::span<const IntegrationTask> tasks,
                                                               const QuadratureOptions& opts) const {
  std::vector<Job> jobs;
  jobs.reserve(tasks.size());
  for (const auto& t : tasks) {
    if (!t.f.integrable_at_zero())
      throw Error(ErrorCode::NonIntegrable, t.f.describe() + " has no integrability certificate at 0");
    jobs.push_back({&t.f, t.x, t.y, -1, -1});
  }
  return run(jobs, opts);
}

IntegrationResult TracialMeasure::integrate(const FunctionSpec& f, double x, double y,
                                            const QuadratureOptions& opts) const {
  const IntegrationTask task{f, x, y};
  auto r = integrate_batch(std::span<const IntegrationTask>(&task, 1), opts);
  if (!r[0].converged)
    throw Error(ErrorCode::QuadratureFailure,
                "error estimate " + std::to_string(r[0].error) + " above tolerance for " + f.describe());
  return r[0];
}

double TracialMeasure::moment(int i, int j, const QuadratureOptions& opts) const {
  if (i < 0 || j < 0) throw Error(ErrorCode::InvalidArgument, "moment indices must be nonnegative");
  const Job job{nullptr, 0.0, 0.0, i, j};
  const auto r = run(std::span<const Job>(&job, 1), opts);
  if (!r[0].converged) throw Error(ErrorCode::QuadratureFailure, "moment quadrature did not converge");
  return r[0].value;
}

std::vector<std::vector<double>> TracialMeasure::moments(int max_degree, const QuadratureOptions& opts) const {
  if (max_degree < 0) throw Error(ErrorCode::InvalidArgument, "max_degree must be nonnegative");
  std::vector<Job> jobs;
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; i + j <= max_degree; ++j) jobs.push_back({nullptr, 0.0, 0.0, i, j});
  const auto r = run(jobs, opts);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(max_degree) + 1);
  std::size_t idx = 0;
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; i + j <= max_degree; ++j) {
      if (!r[idx].converged) throw Error(ErrorCode::QuadratureFailure, "moment quadrature did not converge");
      out[static_cast<std::size_t>(i)].push_back(r[idx++].value);
    }
  return out;
}

}  // namespace tracial::measure
