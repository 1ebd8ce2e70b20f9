#include "tracial/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "tracial/errors.hpp"
#include "tracial/htransform.hpp"

namespace tracial::verify {

namespace {

using linalg::Complex;

constexpr double kNegativeEigenTol = 1e-10;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string direction_label(double x, double y) { return "(" + fmt(x) + "," + fmt(y) + ")"; }

ComplexMatrix gaussian_matrix(int n, double scale, std::mt19937_64& rng) {
  // Real and imaginary parts of variance 1/2: E|g|^2 = 1.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = scale * Complex(re, im);
    }
  return g;
}

HermitianMatrix gue(int n, double scale, std::mt19937_64& rng) {
  return HermitianMatrix::symmetrized(gaussian_matrix(n, scale, rng));
}

double min_eigenvalue(const HermitianMatrix& m) { return linalg::eigvals_hermitian(m).front(); }

void require_psd(const HermitianMatrix& a, double scale) {
  const double lo = min_eigenvalue(a);
  if (lo < -kNegativeEigenTol * scale)
    throw Error(ErrorCode::NotPSD, "A has eigenvalue " + fmt(lo));
}

// Σ f(λ_i(tA + B)) for the tone families.
double tone_trace(const HermitianPair& pair, ToneKind kind, int k, double t) {
  double sum = 0.0;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (double lam : linalg::eigvals_hermitian(pair.combination(t, 1.0))) {
    switch (kind) {
      case ToneKind::PosPartPower:
        if (lam > 0.0) sum += std::pow(lam, k - 1);
        break;
      case ToneKind::Monomial:
        sum += std::pow(lam, k);
        break;
      case ToneKind::Exp:
        sum += std::exp(lam);
        break;
      case ToneKind::NegExp:
        sum += sign * std::exp(-lam);
        break;
    }
  }
  return sum;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Integrals of one measure at several directions, or a failure reason.
struct SideValues {
  std::vector<double> values;
  std::string failure;
};

SideValues integrate_all(const TracialMeasure& mu, const FunctionSpec& f,
                         std::span<const std::pair<double, double>> dirs, const measure::QuadratureOptions& opts) {
  std::vector<measure::IntegrationTask> tasks;
  for (const auto& [x, y] : dirs) tasks.push_back({f, x, y});
  SideValues out;
  const auto results = mu.integrate_batch(tasks, opts);
  for (const auto& r : results) {
    if (!r.converged) out.failure = "quadrature did not converge";
    out.values.push_back(r.value);
  }
  return out;
}

VerificationReport compare(std::string name, double lhs, double rhs, double tol, const std::string& failure) {
  if (!failure.empty()) {
    auto r = VerificationReport::failure(std::move(name), failure);
    r.note("lhs", lhs).note("rhs", rhs);
    return r;
  }
  return VerificationReport::equality(std::move(name), lhs, rhs, tol);
}

}  // namespace

std::string tone_name(ToneKind kind) {
  switch (kind) {
    case ToneKind::PosPartPower: return "t_+^(k-1)";
    case ToneKind::Monomial: return "t^k";
    case ToneKind::Exp: return "exp(t)";
    case ToneKind::NegExp: return "(-1)^k exp(-t)";
  }
  return "?";
}


HermitianPair random_pair(const RandomPairConfig& config) {
  if (config.dim < 1) throw Error(ErrorCode::InvalidArgument, "random_pair needs dim >= 1");
  if (!(config.scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "random_pair needs scale > 0");
  std::mt19937_64 rng(config.seed);
  for (int attempt = 0; attempt < std::max(1, config.max_attempts); ++attempt) {
    HermitianMatrix a = gue(config.dim, config.scale, rng);
    HermitianMatrix b = gue(config.dim, config.scale, rng);
    if (config.psd_a) {
      const double lo = min_eigenvalue(a);
      if (lo < 0.0) {
        const double shift = std::abs(lo) + 1e-6 * config.scale;
        a = a.combine(1.0, HermitianMatrix::identity(config.dim), shift);
      }
    }
    HermitianPair pair(std::move(a), std::move(b));
    if (!config.ensure_distinct_roots) return pair;
    try {
      const auto an = pencil::analyze(pair);
      if (an.nondegenerate && an.distinct_real_roots) return pair;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegeneratePencil) throw;
    }
  }
  throw Error(ErrorCode::GenerationFailure,
              "no pair with distinct roots after " + std::to_string(config.max_attempts) + " attempts");
}

ComplexMatrix random_complex_matrix(int n, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_matrix(n, scale, rng);
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(n, 1.0, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

double trace_h(const HermitianPair& pair, const FunctionSpec& f, double x, double y) {
  double sum = 0.0;
  for (double lam : linalg::eigvals_hermitian(pair.combination(x, y))) sum += htransform::h_apply(f, lam);
  return sum;
}

VerificationReport identity_check(const TracialMeasure& mu, const FunctionSpec& f, double x, double y, double tol,
                                  const measure::QuadratureOptions& opts) {
  const std::string name = "identity " + f.describe() + " " + direction_label(x, y);
  const double lhs = trace_h(mu.pair(), f, x, y);
  try {
    const auto r = mu.integrate(f, x, y, opts);
    auto report = VerificationReport::equality(name, lhs, r.value, tol);
    report.note("quadrature_error", r.error).note("evaluations", static_cast<double>(r.evaluations));
    return report;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::QuadratureFailure) throw;
    auto report = VerificationReport::failure(name, e.what());
    report.note("lhs", lhs);
    return report;
  }
}

std::vector<VerificationReport> identity_suite(const TracialMeasure& mu, std::span<const FunctionSpec> functions,
                                               std::span<const std::pair<double, double>> directions, double tol,
                                               const measure::QuadratureOptions& opts) {
  std::vector<measure::IntegrationTask> tasks;
  for (const auto& f : functions)
    for (const auto& [x, y] : directions) tasks.push_back({f, x, y});
  const auto results = mu.integrate_batch(tasks, opts);
  std::vector<VerificationReport> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const auto& r = results[i];
    const std::string name = "identity " + t.f.describe() + " " + direction_label(t.x, t.y);
    const double lhs = trace_h(mu.pair(), t.f, t.x, t.y);
    VerificationReport report = r.converged ? VerificationReport::equality(name, lhs, r.value, tol)
                                            : VerificationReport::failure(name, "quadrature did not converge");
    if (!r.converged) report.note("lhs", lhs).note("rhs", r.value);
    report.note("quadrature_error", r.error);
    out.push_back(std::move(report));
  }
  return out;
}

VerificationReport schatten_identity_check(const TracialMeasure& mu, double p, double x, double y, double tol,
                                           const measure::QuadratureOptions& opts) {
  const std::string name = "schatten p=" + fmt(p) + " " + direction_label(x, y);
  double lhs = 0.0;
  for (double lam : linalg::eigvals_hermitian(mu.pair().combination(x, y))) lhs += std::pow(std::abs(lam), p);
  try {
    const auto r = mu.integrate(FunctionSpec::abs_power(p), x, y, opts);
    auto report = VerificationReport::equality(name, lhs, p * (p + 1.0) * r.value, tol);
    report.note("quadrature_error", p * (p + 1.0) * r.error);
    return report;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::QuadratureFailure) throw;
    auto report = VerificationReport::failure(name, e.what());
    report.note("lhs", lhs);
    return report;
  }
}

std::vector<std::pair<double, double>> default_directions() {
  std::vector<std::pair<double, double>> dirs;
  for (int k = 0; k < 8; ++k) {
    const double th = (2 * k + 1) * std::numbers::pi / 8.0;
    dirs.emplace_back(std::cos(th), std::sin(th));
  }
  return dirs;
}

std::vector<FunctionSpec> default_functions() {
  std::vector<FunctionSpec> fs;
  for (double p : {1.0, 2.0, 2.5, 3.0, 4.0}) fs.push_back(FunctionSpec::abs_power(p));
  for (int k : {2, 3, 4}) fs.push_back(FunctionSpec::pos_part_power(k));
  return fs;
}

HermitianMatrix hermitian_dilation(const ComplexMatrix& m, double p) {
  const auto n = m.rows();
  ComplexMatrix d = ComplexMatrix::Zero(2 * n, 2 * n);
  const double c = std::pow(2.0, -1.0 / p);
  d.topRightCorner(n, n) = c * m;
  d.bottomLeftCorner(n, n) = c * m.adjoint();
  return HermitianMatrix::symmetrized(d);
}

VerificationReport hanner_check(const ComplexMatrix& a, const ComplexMatrix& b, double p, double tol) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidP, "Hanner checks need p >= 1, got " + fmt(p));
  const double na = linalg::schatten_norm(a, p);
  const double nb = linalg::schatten_norm(b, p);
  const double sum = std::pow(linalg::schatten_norm(a + b, p), p) + std::pow(linalg::schatten_norm(a - b, p), p);
  const double bound = std::pow(na + nb, p) + std::pow(std::abs(na - nb), p);
  VerificationReport r;
  if (p >= 2.0) {
    r = VerificationReport::upper_bound("hanner p=" + fmt(p), sum, bound, tol);
    r.note("slack", bound - sum);
  } else {
    r = VerificationReport::upper_bound("hanner.reversed p=" + fmt(p), bound, sum, tol);
    r.note("slack", sum - bound).note("status", "derived, not stated");
  }
  r.note("norm_a", na).note("norm_b", nb);
  return r;
}

VerificationReport ktone_check(const HermitianPair& pair, ToneKind kind, int k, std::span<const double> t_grid,
                               const ToneOptions& opts) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k-tone checks need k >= 1");
  if (!(opts.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  if (k % 2 == 1 && opts.enforce_psd) require_psd(pair.a(), 1.0);

  double max_abs = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  double worst_half = std::numeric_limits<double>::infinity();
  double richardson = 0.0;
  for (double t : t_grid) {
    double diff[2];
    for (int level = 0; level < 2; ++level) {
      const double h = level == 0 ? opts.h : 0.5 * opts.h;
      double d = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double f = tone_trace(pair, kind, k, t + j * h);
        max_abs = std::max(max_abs, std::abs(f));
        d += ((k - j) % 2 == 0 ? 1.0 : -1.0) * binomial(k, j) * f;
      }
      diff[level] = d;
    }
    worst = std::min(worst, diff[0]);
    worst_half = std::min(worst_half, diff[1]);
    // Derivative estimates at the two steps; they agree to O(h) where F is smooth.
    const double d0 = diff[0] / std::pow(opts.h, k);
    const double d1 = diff[1] / std::pow(0.5 * opts.h, k);
    richardson = std::max(richardson, std::abs(d0 - d1) / std::max(1.0, std::abs(d1)));
  }
  const double violation = std::max(0.0, -std::min(worst, worst_half)) / std::max(max_abs, 1e-300);
  auto r = VerificationReport::upper_bound("ktone " + tone_name(kind) + " k=" + std::to_string(k), violation, 0.0,
                                           opts.tol);
  r.note("min_diff_h", worst).note("min_diff_h2", worst_half).note("max_abs_f", max_abs);
  r.note("richardson_gap", richardson).note("h", opts.h);
  if (!opts.enforce_psd) r.gating = false;
  return r;
}

std::vector<VerificationReport> halfplane_check(const TracialMeasure& mu, int sample_count, double tol,
                                                std::uint64_t seed) {
  const double scale = mu.support_radius();
  require_psd(mu.pair().a(), scale);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(-scale, -1e-3 * scale);
  std::uniform_real_distribution<double> ub(-scale, scale);
  double worst = 0.0;
  int taken = 0;
  while (taken < sample_count) {
    const double a = ua(rng);
    const double b = ub(rng);
    if (std::abs(a) + std::abs(b) > scale) continue;
    ++taken;
    worst = std::max(worst, mu.density(a, b));
  }
  double min_alpha = std::numeric_limits<double>::infinity();
  for (const auto& s : mu.segments()) min_alpha = std::min(min_alpha, s.alpha);
  const double alpha_violation = mu.segments().empty() ? 0.0 : std::max(0.0, -min_alpha);

  std::vector<VerificationReport> out;
  out.push_back(VerificationReport::upper_bound("halfplane.density", worst, 0.0, tol));
  out.back().note("samples", static_cast<double>(sample_count));
  out.push_back(VerificationReport::upper_bound("halfplane.segments", alpha_violation, 0.0, 1e-10));
  if (!mu.segments().empty()) out.back().note("min_alpha", min_alpha);
  for (auto& r : out) r.seed = seed;
  return out;
}

std::vector<std::vector<double>> trace_moments(const HermitianPair& pair, int degree) {
  const int top = degree + 2;
  const int n = pair.dim();
  const ComplexMatrix& a = pair.a().matrix();
  const ComplexMatrix& b = pair.b().matrix();
  // words[i][j]: sum of all products with i factors A and j factors B.
  std::vector<std::vector<ComplexMatrix>> words(static_cast<std::size_t>(top + 1),
                                                std::vector<ComplexMatrix>(static_cast<std::size_t>(top + 1)));
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(top + 1),
                                       std::vector<double>(static_cast<std::size_t>(top + 1), 0.0));
  for (int m = 0; m <= top; ++m)
    for (int i = 0; i <= m; ++i) {
      const int j = m - i;
      ComplexMatrix& w = words[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (m == 0) {
        w = ComplexMatrix::Identity(n, n);
        continue;
      }
      w = ComplexMatrix::Zero(n, n);
      if (i > 0) w += a * words[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
      if (j > 0) w += b * words[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
      // ∫ (ax + by)^m dμ = tr (xA + yB)^m / (m(m+1)); match x^i y^j.
      raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          w.trace().real() / (binomial(m, i) * m * (m + 1.0));
    }
  std::vector<std::vector<double>> out(static_cast<std::size_t>(degree + 1),
                                       std::vector<double>(static_cast<std::size_t>(degree + 1), 0.0));
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          raw[static_cast<std::size_t>(i + 2)][static_cast<std::size_t>(j)] +
          raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 2)];
  return out;
}

std::vector<VerificationReport> property_suite(const TracialMeasure& mu, const PropertyConfig& config) {
  std::vector<VerificationReport> out;
  const auto& qo = config.quadrature;
  const FunctionSpec f = FunctionSpec::abs_power(3.0);
  std::vector<std::pair<double, double>> dirs;
  const auto all = default_directions();
  dirs.assign(all.begin(), all.begin() + 4);
  const auto base = integrate_all(mu, f, dirs, qo);
  auto add = [&](const std::string& check, const SideValues& other, const std::vector<double>& expect,
                 const std::string& fail) {
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      out.push_back(compare(check + " " + direction_label(dirs[i].first, dirs[i].second), other.values[i], expect[i],
                            config.tol, other.failure.empty() ? fail : other.failure));
      out.back().seed = config.seed;
    }
  };

  const double c30 = std::cos(std::numbers::pi / 6.0), s30 = std::sin(std::numbers::pi / 6.0);
  const std::array<double, 4> v = config.v.value_or(std::array<double, 4>{c30, -s30, s30, c30});

  // Pushforward: ∫ f d(V_* μ) at (x, y) is ∫ f dμ at V^T (x, y).
  {
    const HermitianPair moved = mu.pair().transformed(v[0], v[1], v[2], v[3]);
    const auto mu_v = TracialMeasure::build(moved);
    std::vector<std::pair<double, double>> pulled;
    for (const auto& [x, y] : dirs) pulled.emplace_back(v[0] * x + v[2] * y, v[1] * x + v[3] * y);
    const auto rhs = integrate_all(mu, f, pulled, qo);
    add("property.pushforward", integrate_all(mu_v, f, dirs, qo), rhs.values, rhs.failure);
  }
  // Unitary invariance.
  {
    const HermitianPair conj = mu.pair().conjugated(random_unitary(mu.pair().dim(), config.seed + 17));
    const auto mu_u = TracialMeasure::build(conj);
    add("property.unitary", integrate_all(mu_u, f, dirs, qo), base.values, base.failure);
  }
  // Block additivity.
  {
    const HermitianPair partner =
        config.partner.value_or(random_pair({.dim = 2, .scale = 1.0, .seed = config.seed + 1000}));
    const HermitianPair block = mu.pair().direct_sum(partner);
    const auto mu_p = TracialMeasure::build(partner);
    const auto mu_b = TracialMeasure::build(block);
    const auto part = integrate_all(mu_p, f, dirs, qo);
    std::vector<double> sum(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) sum[i] = base.values[i] + part.values[i];
    add("property.block", integrate_all(mu_b, f, dirs, qo), sum,
        !base.failure.empty() ? base.failure : part.failure);
  }
  // Support: the uncut density vanishes on {R < |a| + |b| <= 1.1 R}, and every
  // segment ends inside {|a| + |b| <= R}.
  {
    const double radius = mu.support_radius();
    std::mt19937_64 rng(config.seed + 31);
    std::uniform_real_distribution<double> u(-1.1 * radius, 1.1 * radius);
    double worst = 0.0;
    for (int taken = 0; taken < config.support_samples;) {
      const double a = u(rng), b = u(rng);
      const double l1 = std::abs(a) + std::abs(b);
      if (l1 <= radius || l1 > 1.1 * radius) continue;
      ++taken;
      worst = std::max(worst, mu.density_formula(a, b));
    }
    out.push_back(VerificationReport::upper_bound("property.support.density", worst, 0.0, 1e-8));
    double reach = 0.0;
    for (const auto& s : mu.segments()) reach = std::max(reach, std::abs(s.alpha) + std::abs(s.beta));
    out.push_back(VerificationReport::upper_bound("property.support.segments", reach, radius * (1.0 + 1e-12), 0.0));
  }
  // Moments of (a² + b²) μ against traces of words.
  {
    const int deg = config.moment_degree;
    const auto expect = trace_moments(mu.pair(), deg);
    std::string fail;
    std::vector<std::vector<double>> got;
    try {
      got = mu.moments(deg, qo);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::QuadratureFailure) throw;
      fail = e.what();
    }
    const double radius = std::max(mu.support_radius(), 1e-300);
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j) {
        // Compare in units of R^(i+j+2) so vanishing odd moments are judged on scale.
        const double unit = std::pow(radius, i + j + 2);
        const double lhs = fail.empty() ? got[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / unit : 0.0;
        const double rhs = expect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / unit;
        out.push_back(compare("property.moment (" + std::to_string(i) + "," + std::to_string(j) + ")", lhs, rhs,
                              config.tol, fail));
        out.back().note("unit", unit);
      }
  }
  return out;
}

std::vector<VerificationReport> lemmas_suite(std::span<const HermitianPair> pairs) {
  std::vector<VerificationReport> out;
  const double pi = std::numbers::pi;

  // I1 closed form against quadrature on a 5 x 4 x 5 grid of (Re λ, Im λ, M).
  {
    double worst = 0.0, at_closed = 0.0, at_quad = 0.0;
    std::string where;
    int count = 0;
    for (double re : {-2.0, -0.5, 0.0, 0.3, 1.7})
      for (double im : {0.0, 0.1, 1.0, 3.0})
        for (double m : {0.5, 1.0, 2.5, 10.0, 100.0}) {
          const Complex lam(re, im);
          const double c = htransform::i1_closed(lam, m);
          const double q = htransform::i1_quadrature(lam, m);
          const double err = std::abs(c - q) / std::max(1.0, std::abs(q));
          ++count;
          if (err >= worst) {
            worst = err;
            at_closed = c;
            at_quad = q;
            where = "lambda=" + fmt(re) + "+" + fmt(im) + "i M=" + fmt(m);
          }
        }
    out.push_back(VerificationReport::equality("lemma.i1.closed_vs_quadrature", at_closed, at_quad, 1e-8));
    out.back().note("worst_point", where).note("points", static_cast<double>(count));
  }
  // Large-M limits at M/|λ| = 1e6.
  for (Complex lam : {Complex(0.0, 1.0), Complex(0.5, -2.0), Complex(-3.0, 0.25)}) {
    const double m = 1e6 * std::abs(lam);
    out.push_back(VerificationReport::equality(
        "lemma.i1.limit lambda=" + fmt(lam.real()) + "+" + fmt(lam.imag()) + "i",
        htransform::i1_closed(lam, m), pi * std::abs(lam.imag()), 1e-4));
  }
  for (double lam : {1.0, -2.0, 0.5}) {
    const double m = 1e6 * std::abs(lam);
    const double s = lam > 0.0 ? 1.0 : -1.0;
    out.push_back(VerificationReport::equality("lemma.i2.limit lambda=" + fmt(lam), htransform::i2_closed(lam, m),
                                               -0.5 * pi * pi * s, 1e-3));
  }
  // Eigenvalue dynamics at every simple real root.
  const double offsets[] = {1e-2, 1e-3, 1e-4};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto an = pencil::analyze(pairs[p]);
    for (std::size_t i = 0; i < an.roots.size(); ++i) {
      const auto& root = an.roots[i];
      if (!root.is_real || root.multiplicity > 1) continue;
      auto r = pencil::eigen_dynamics_check(pairs[p], root, offsets);
      r.check_name = "lemma.eigen_dynamics pair=" + std::to_string(p) + " root=" + std::to_string(i);
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace tracial::verify
