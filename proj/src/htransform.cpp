#include "tracial/htransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "tracial/errors.hpp"

namespace tracial::htransform {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

constexpr double kPi = std::numbers::pi;

template <class F>
double gl(F&& f, double a, double b) {
  return Rule::integrate(f, a, b);
}

// ∫ over [a, b] with ratio-2 panels shrinking toward the endpoints flagged
// singular. Stops before the nodes round onto the endpoint; a logarithmic
// singularity then loses O(h log h) of mass.
template <class F>
double graded(F&& f, double a, double b, bool sing_a, bool sing_b) {
  constexpr int kLevels = 80;
  if (!(b > a)) return 0.0;
  if (sing_a && sing_b) {
    const double mid = 0.5 * (a + b);
    return graded(f, a, mid, true, false) + graded(f, mid, b, false, true);
  }
  if (!sing_a && !sing_b) return gl(f, a, b);
  const double len = b - a;
  double sum = 0.0;
  double h = len;
  const double end = sing_a ? a : b;
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(end);
  for (int j = 0; j < kLevels && h > floor; ++j) {
    const double inner = 0.5 * h;
    if (sing_a)
      sum += gl(f, a + inner, a + h);
    else
      sum += gl(f, b - h, b - inner);
    h = inner;
  }
  return sum;
}

void require_certified(const FunctionSpec& f) {
  if (!f.integrable_at_zero())
    throw Error(ErrorCode::NonIntegrable, f.describe() + " has no integrability certificate at 0");
}

// Ein(z) - (e^z - 1)/z + 1 = Σ_{k>=1} z^k / (k! k (k+1)).
double h_exp_series(double z) {
  double term = 1.0;  // z^k / k!
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= z / k;
    const double add = term / (static_cast<double>(k) * (k + 1));
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double h_exp_closed(double z) {
  if (z == 0.0) return 0.0;
  if (std::abs(z) <= 2.0) return h_exp_series(z);
  const double ein = std::expint(z) - std::numbers::egamma - std::log(std::abs(z));
  return ein - std::expm1(z) / z + 1.0;
}

// Table route: f(xt) is piecewise linear in t and vanishes near t = 0.
double h_table(const FunctionSpec& f, double x) {
  std::vector<double> cuts{0.0, 1.0};
  for (double node : f.nodes()) {
    const double t = node / x;
    if (t > 0.0 && t < 1.0) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double t) { return (1.0 - t) / t * f(x * t); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) sum += gl(integrand, cuts[i], cuts[i + 1]);
  return sum;
}

// log|1 - λ/t| without cancellation for |t| >> |λ|.
double log_abs_one_minus(Complex lambda, double t) {
  const double re = lambda.real();
  const double im = lambda.imag();
  const double u = (-2.0 * re * t + re * re + im * im) / (t * t);
  if (std::abs(u) < 0.5) return 0.5 * std::log1p(u);
  const double d = t - re;
  return 0.5 * std::log((d * d + im * im) / (t * t));
}

// J(L) = ∫_{-L}^{L} log|1 - u| du/u.
double j_integral(double big_l) {
  auto h = [](double u) { return (std::log1p(-u) - std::log1p(u)) / u; };
  if (big_l <= 1.0) return graded(h, 0.0, big_l, false, true);
  // u -> 1/u maps (1, L] onto [1/L, 1) with the same integrand.
  return graded(h, 0.0, 1.0, false, true) + graded(h, 1.0 / big_l, 1.0, false, true);
}

}  // namespace

double h_apply(const FunctionSpec& f, double x) {
  require_certified(f);
  switch (f.kind()) {
    case FunctionKind::AbsPower: {
      const double p = f.parameter();
      return std::pow(std::abs(x), p) / (p * (p + 1.0));
    }
    case FunctionKind::PosPartPower: {
      const double k = f.parameter();
      return x > 0.0 ? f(x) / (k * (k - 1.0)) : 0.0;
    }
    case FunctionKind::ExpAffine:
      return h_exp_closed(f.parameter() * x);
    case FunctionKind::WindowTable:
      return x == 0.0 ? 0.0 : h_table(f, x);
  }
  return 0.0;
}

double h_apply_quadrature(const FunctionSpec& f, double x) {
  require_certified(f);
  if (x == 0.0) return 0.0;
  if (f.kind() == FunctionKind::WindowTable) return h_table(f, x);
  if (f.kind() == FunctionKind::PosPartPower && x < 0.0) return 0.0;
  // Panels [2^-(j+1), 2^-j] until they stop contributing.
  auto integrand = [&](double t) { return (1.0 - t) / t * f(x * t); };
  double sum = 0.0;
  double hi = 1.0;
  for (int j = 0; j < 1000; ++j) {
    const double lo = 0.5 * hi;
    const double add = gl(integrand, lo, hi);
    sum += add;
    if (j >= 4 && std::abs(add) <= 1e-17 * std::abs(sum)) break;
    hi = lo;
  }
  return sum;
}

Complex g_eval(double x) {
  if (x == 0.0) return 0.0;
  if (std::abs(x) <= 1.0) {
    // Σ (ix)^k / (k! k (k+1)).
    Complex term = 1.0;
    Complex sum = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= Complex(0.0, x) / static_cast<double>(k);
      const Complex add = term / (static_cast<double>(k) * (k + 1));
      sum += add;
      if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // e^{ixt} - 1 = -2 sin²(xt/2) + i sin(xt) avoids cancellation at small t.
  auto re = [x](double t) {
    const double s = std::sin(0.5 * x * t);
    return -2.0 * s * s * (1.0 - t) / t;
  };
  auto im = [x](double t) { return std::sin(x * t) * (1.0 - t) / t; };
  const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(x) / 2.0)));
  double sr = 0.0, si = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = static_cast<double>(i) / panels;
    const double b = static_cast<double>(i + 1) / panels;
    sr += gl(re, a, b);
    si += gl(im, a, b);
  }
  return {sr, si};
}

Complex big_g(const pencil::HermitianPair& pair, double x, double y) {
  Complex sum = 0.0;
  for (double lam : linalg::eigvals_hermitian(pair.combination(x, y))) sum += g_eval(lam);
  return sum;
}

double i1_closed(Complex lambda, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "I1 needs M > 0");
  const double re = lambda.real();
  const double im = lambda.imag();
  // (M - R) log|1 - λ/M| + (M + R) log|1 + λ/M|; x log x -> 0 at λ = ±M.
  auto part = [&](double sign) {
    const double pre = m - sign * re;
    if (pre == 0.0 && im == 0.0) return 0.0;
    return pre * log_abs_one_minus(sign * lambda, m);
  };
  double out = part(1.0) + part(-1.0);
  if (im != 0.0) out += im * (std::atan((m - re) / im) + std::atan((m + re) / im));
  return out;
}

double i1_quadrature(Complex lambda, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "I1 needs M > 0");
  auto f = [lambda](double t) { return log_abs_one_minus(lambda, t); };
  const double re = lambda.real();
  std::vector<double> cuts{-m, 0.0, m};
  if (std::abs(re) < m && re != 0.0) cuts.push_back(re);
  std::sort(cuts.begin(), cuts.end());
  auto singular = [&](double t) { return t == 0.0 || t == re; };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += graded(f, cuts[i], cuts[i + 1], singular(cuts[i]), singular(cuts[i + 1]));
  return sum;
}

double e1(Complex lambda, double m) { return i1_closed(lambda, m) - kPi * std::abs(lambda.imag()); }

double i2_closed(double lambda, double m) {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroLambda, "I2 is undefined at λ = 0");
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "I2 needs M > 0");
  const double j = j_integral(m / std::abs(lambda));
  return lambda > 0.0 ? j : -j;
}

double e2(double lambda, double m) {
  const double s = lambda > 0.0 ? 1.0 : -1.0;
  return i2_closed(lambda, m) + 0.5 * kPi * kPi * s;
}

}  // namespace tracial::htransform
