#include <cmath>
#include <numbers>

#include "doctest.h"

#include "tracial/errors.hpp"
#include "tracial/fixtures.hpp"
#include "tracial/htransform.hpp"

using namespace tracial;
using namespace tracial::htransform;

namespace {

constexpr double kPi = std::numbers::pi;

// Real dilogarithm by its series on [-1/2, 1/2] and the standard reflections.
double li2(double x) {
  if (x > 1.0) return kPi * kPi / 3.0 - 0.5 * std::log(x) * std::log(x) - li2(1.0 / x);  // real part
  if (x == 1.0) return kPi * kPi / 6.0;
  if (x > 0.5) return kPi * kPi / 6.0 - std::log(x) * std::log1p(-x) - li2(1.0 - x);
  if (x < -1.0) return -kPi * kPi / 6.0 - 0.5 * std::log(-x) * std::log(-x) - li2(1.0 / x);
  if (x < -0.5) return 0.5 * li2(x * x) - li2(-x);
  double term = x, sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    sum += term / (static_cast<double>(k) * k);
    term *= x;
  }
  return sum;
}

// ∫_{-L}^{L} log|1 - u| du/u = Li2(-L) - Re Li2(L).
double j_oracle(double big_l) { return li2(-big_l) - li2(big_l); }

}  // namespace

TEST_CASE("closed forms agree with quadrature") {
  const FunctionSpec fs[] = {FunctionSpec::abs_power(0.3), FunctionSpec::abs_power(1.0), FunctionSpec::abs_power(3.0),
                             FunctionSpec::pos_part_power(2), FunctionSpec::pos_part_power(4),
                             FunctionSpec::exp_affine(1.5), FunctionSpec::exp_affine(-4.0)};
  for (const auto& f : fs)
    for (double x : {-3.0, -0.5, 1e-3, 0.7, 2.0, 9.0}) {
      const double c = h_apply(f, x), q = h_apply_quadrature(f, x);
      CHECK_MESSAGE(std::abs(c - q) <= 1e-12 * std::max(1.0, std::abs(c)), f.describe() << " x=" << x);
    }
}

TEST_CASE("H of the power families") {
  CHECK(h_apply(FunctionSpec::abs_power(3.0), -1.0) == doctest::Approx(1.0 / 12.0));
  CHECK(h_apply(FunctionSpec::abs_power(2.0), 2.0) == doctest::Approx(4.0 / 6.0));
  CHECK(h_apply(FunctionSpec::pos_part_power(2), 1.0) == doctest::Approx(0.5));
  CHECK(h_apply(FunctionSpec::pos_part_power(3), -1.0) == 0.0);
  CHECK(h_apply(FunctionSpec::abs_power(2.0), 0.0) == 0.0);
}

TEST_CASE("H of the exponential family matches high-precision values") {
  // Reference values from 30-digit quadrature.
  CHECK(h_apply(FunctionSpec::exp_affine(1.5), 2.0) == doctest::Approx(2.8961589759932180924).epsilon(1e-14));
  CHECK(h_apply(FunctionSpec::exp_affine(-4.0), 9.0) == doctest::Approx(-3.1885123811354206398).epsilon(1e-14));
  CHECK(h_apply(FunctionSpec::exp_affine(1.0), 0.3) == doctest::Approx(0.15789257490523356145).epsilon(1e-14));
}

TEST_CASE("H of a window table is exact for the piecewise-linear interpolant") {
  // f = hat on [1, 3] peaking at 2; H(f)(x) = ∫ (1-t)/t f(xt) dt in closed form.
  const auto f = FunctionSpec::window_table({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
  auto exact = [](double x) {
    // Primitive of (1-t)/t (x t - 1) on [1/x, 2/x] plus (1-t)/t (3 - x t) on [2/x, 3/x].
    auto p1 = [x](double t) { return x * t - x * t * t / 2 - std::log(t) + t; };
    auto p2 = [x](double t) { return 3 * std::log(t) - 3 * t - x * t + x * t * t / 2; };
    return (p1(2 / x) - p1(1 / x)) + (p2(3 / x) - p2(2 / x));
  };
  for (double x : {3.5, 5.0, 10.0}) CHECK(h_apply(f, x) == doctest::Approx(exact(x)).epsilon(1e-13));
  CHECK(h_apply(f, 0.5) == 0.0);
  CHECK_THROWS_AS(h_apply(FunctionSpec::window_table({-1.0, 1.0}, {1.0, 1.0}), 1.0), Error);
}

TEST_CASE("g matches high-precision values on both sides of the series cutoff") {
  const struct {
    double x, re, im;
  } ref[] = {{0.5, -0.020703640356606453072, 0.24827254182381212139},
             {3.0, -0.60323817024826463174, 1.1853216957993197706},
             {9.0, -1.7648836537092582552, 1.4526922689535272742},
             {-4.0, -0.91529110008137182824, -1.3447922337331500794}};
  for (const auto& r : ref) {
    const auto g = g_eval(r.x);
    CHECK(g.real() == doctest::Approx(r.re).epsilon(1e-13));
    CHECK(g.imag() == doctest::Approx(r.im).epsilon(1e-13));
  }
  CHECK(std::abs(g_eval(0.0)) == 0.0);
  const auto pair = fixtures::figure_pairs()[0].pair;
  const auto big = big_g(pair, 1.0, 0.0);
  CHECK(big.real() == doctest::Approx(2 * g_eval(1.0).real()));
  CHECK(big.imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("I1 closed form against high-precision quadrature") {
  const struct {
    Complex lambda;
    double m, value;
  } ref[] = {{{0.3, 0.2}, 2.0, 0.65306637530865325524},
             {{-1.5, 0.7}, 1.0, 2.9346278757590051373},
             {{2.0, 0.0}, 1.0, 3.2958368660043290742},
             {{0.5, 0.0}, 2.0, 0.12633576960785299826},
             {{0.0, 1.0}, 10.0, 3.0417586571391500122}};
  for (const auto& r : ref) {
    CHECK(i1_closed(r.lambda, r.m) == doctest::Approx(r.value).epsilon(1e-13));
    CHECK(i1_quadrature(r.lambda, r.m) == doctest::Approx(r.value).epsilon(1e-11));
  }
  CHECK(i1_closed(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(i1_closed({1.0, 1.0}, 0.0), Error);
}

TEST_CASE("I1 and I2 limits") {
  CHECK(std::abs(i1_closed({0.0, 1.0}, 1e6) - kPi) < 1e-4);
  CHECK(std::abs(e1({0.7, -2.0}, 2e6)) < 1e-4);
  CHECK(std::abs(i2_closed(1.0, 1e6) + kPi * kPi / 2) < 1e-3);
  CHECK(std::abs(i2_closed(-3.0, 3e6) - kPi * kPi / 2) < 1e-3);
  CHECK(std::abs(e2(0.25, 0.25e6)) < 1e-3);
}

TEST_CASE("I2 against the dilogarithm") {
  for (double lam : {1.0, -2.0, 0.5})
    for (double l : {0.1, 0.5, 0.99, 1.0, 1.01, 3.0, 100.0}) {
      const double s = lam > 0 ? 1.0 : -1.0;
      CHECK_MESSAGE(i2_closed(lam, l * std::abs(lam)) == doctest::Approx(s * j_oracle(l)).epsilon(1e-11),
                    "lambda=" << lam << " L=" << l);
    }
  CHECK_THROWS_AS(i2_closed(0.0, 1.0), Error);
  CHECK_THROWS_AS(i2_closed(1.0, -1.0), Error);
}
