#include <cmath>

#include "doctest.h"

#include "tracial/errors.hpp"
#include "tracial/function_spec.hpp"

using namespace tracial;

TEST_CASE("built-in families evaluate and carry certificates") {
  const auto f = FunctionSpec::abs_power(2.5);
  CHECK(f(-2.0) == doctest::Approx(std::pow(2.0, 2.5)));
  CHECK(f.integrable_at_zero());
  CHECK_FALSE(FunctionSpec::abs_power(0.0).integrable_at_zero());
  CHECK_THROWS_AS(FunctionSpec::abs_power(NAN), Error);

  const auto g = FunctionSpec::pos_part_power(3);
  CHECK(g(2.0) == doctest::Approx(4.0));
  CHECK(g(-2.0) == 0.0);
  CHECK(g.integrable_at_zero());
  CHECK_FALSE(FunctionSpec::pos_part_power(1).integrable_at_zero());
  CHECK_THROWS_AS(FunctionSpec::pos_part_power(0), Error);

  const auto e = FunctionSpec::exp_affine(-2.0);
  CHECK(e(1e-12) == doctest::Approx(-2e-12));
  CHECK(e.integrable_at_zero());
}

TEST_CASE("window tables") {
  const auto w = FunctionSpec::window_table({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
  CHECK(w(1.5) == doctest::Approx(0.5));
  CHECK(w(0.0) == 0.0);
  CHECK(w(4.0) == 0.0);
  CHECK(w.integrable_at_zero());
  // Nonzero at 0: no certificate.
  const auto bad = FunctionSpec::window_table({-1.0, 1.0}, {1.0, 1.0});
  CHECK_FALSE(bad.integrable_at_zero());
  CHECK_THROWS_AS(FunctionSpec::window_table({1.0, 1.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(FunctionSpec::window_table({1.0}, {0.0}), Error);
}
