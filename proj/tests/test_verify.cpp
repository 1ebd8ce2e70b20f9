#include <cmath>
#include <string>

#include "doctest.h"

#include "tracial/errors.hpp"
#include "tracial/fixtures.hpp"
#include "tracial/verify.hpp"

using namespace tracial;
using namespace tracial::verify;

namespace {

HermitianPair diag_pair(std::vector<double> a, std::vector<double> b) {
  return {HermitianMatrix::diagonal(a), HermitianMatrix::diagonal(b)};
}

HermitianMatrix real_sym(double a, double b, double c) {
  linalg::ComplexMatrix m(2, 2);
  m << a, b, b, c;
  return HermitianMatrix(m);
}

std::vector<double> grid() {
  std::vector<double> g;
  for (int i = -4; i <= 4; ++i) g.push_back(0.25 * i);
  return g;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

TEST_CASE("trace_h examples") {
  CHECK(trace_h(diag_pair({1, -1}, {0, 0}), FunctionSpec::abs_power(3.0), 1.0, 0.0) == doctest::Approx(2.0 / 12.0));
  CHECK(trace_h(diag_pair({1, 1}, {0, 0}), FunctionSpec::pos_part_power(2), 1.0, 0.0) == doctest::Approx(1.0));
  const auto fb = fixtures::figure_pairs()[1].pair;
  const auto s = fb.combination(1.0, 1.0).matrix();
  CHECK(trace_h(fb, FunctionSpec::abs_power(2.0), 1.0, 1.0) == doctest::Approx((s * s).trace().real() / 6.0));
}

TEST_CASE("identity_check examples") {
  const auto scalar = TracialMeasure::build(diag_pair({2}, {3}));
  auto r = identity_check(scalar, FunctionSpec::abs_power(2.5), 1.0, 0.0, 1e-8);
  CHECK(r.passed);
  CHECK(r.lhs == doctest::Approx(std::pow(2.0, 2.5) / (2.5 * 3.5)));
  const auto diag = TracialMeasure::build(diag_pair({1, -2, 3}, {0.5, 1, -1}));
  CHECK(identity_check(diag, FunctionSpec::abs_power(3.0), 2.0, -1.0, 1e-8).passed);
  const auto fc = TracialMeasure::build(fixtures::figure_pairs()[2].pair);
  const FunctionSpec f[] = {FunctionSpec::abs_power(3.0)};
  const auto dirs = default_directions();
  for (const auto& rep : identity_suite(fc, f, dirs, 1e-4)) CHECK_MESSAGE(rep.passed, rep.check_name);
}

TEST_CASE("schatten identity") {
  const auto fa = TracialMeasure::build(fixtures::figure_pairs()[0].pair);
  CHECK(schatten_identity_check(fa, 2.0, 0.3, -0.7, 1e-6).passed);
  const auto id = TracialMeasure::build(diag_pair({1, 2}, {0, 1}));
  const auto r = schatten_identity_check(id, 2.0, 1.0, 0.0, 1e-8);
  CHECK(r.passed);
  CHECK(r.lhs == doctest::Approx(5.0));
  const auto rnd = TracialMeasure::build(random_pair({.dim = 3, .seed = 42}));
  CHECK(schatten_identity_check(rnd, 7.0, 0.8, 0.6, 1e-4).passed);
}

TEST_CASE("random pairs are deterministic and honour the PSD shift") {
  const auto p1 = random_pair({.dim = 4, .seed = 11});
  const auto p2 = random_pair({.dim = 4, .seed = 11});
  CHECK((p1.a().matrix() - p2.a().matrix()).norm() == 0.0);
  CHECK((p1.b().matrix() - p2.b().matrix()).norm() == 0.0);
  const auto p3 = random_pair({.dim = 4, .seed = 12});
  CHECK((p1.a().matrix() - p3.a().matrix()).norm() > 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_pair({.dim = 3, .seed = s, .psd_a = true});
    CHECK(linalg::eigvals_hermitian(p.a()).front() >= 0.0);
  }
  for (std::uint64_t s = 0; s < 100; ++s) CHECK(pencil::analyze(random_pair({.dim = 4, .seed = s})).distinct_real_roots);
  CHECK_THROWS_AS(random_pair({.dim = 0}), Error);
}

TEST_CASE("hanner trivial cases and the dilation") {
  const auto a = random_complex_matrix(4, 1.0, 1);
  const auto zero = linalg::ComplexMatrix::Zero(4, 4).eval();
  for (double p : {1.0, 1.5, 2.5, 3.0}) {
    const auto r = hanner_check(a, zero, p, 1e-10);
    CHECK(r.passed);
    CHECK(std::stod(*r.find("slack")) == doctest::Approx(0.0).scale(r.rhs));
  }
  const auto h = HermitianMatrix::symmetrized(a).matrix();
  const auto same = hanner_check(h, h, 3.0, 1e-10);
  CHECK(same.passed);
  CHECK(same.lhs == doctest::Approx(same.rhs));
  CHECK(*hanner_check(a, a, 1.5, 1e-10).find("status") == "derived, not stated");
  CHECK_THROWS_AS(hanner_check(a, a, 0.5, 1e-10), Error);

  const auto b = random_complex_matrix(4, 1.0, 2);
  for (double p : {1.0, 2.5, 4.0}) {
    const auto da = hermitian_dilation(a, p), db = hermitian_dilation(b, p);
    for (auto [x, y] : default_directions()) {
      const double direct = linalg::schatten_norm(x * a + y * b, p);
      const double dil = linalg::schatten_norm(da.combine(x, db, y).matrix(), p);
      CHECK(dil == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  for (std::uint64_t s = 0; s < 50; ++s)
    for (double p : {2.0, 2.5, 3.0, 5.0, 10.0})
      CHECK(hanner_check(random_complex_matrix(4, 1.0, 2 * s), random_complex_matrix(4, 1.0, 2 * s + 1), p, 1e-10)
                .passed);
}

TEST_CASE("k-tone checks") {
  const auto psd = random_pair({.dim = 3, .seed = 3, .psd_a = true});
  const auto g = grid();
  // k = 1, f = t: differences are h tr A >= 0.
  const auto r1 = ktone_check(psd, ToneKind::Monomial, 1, g);
  CHECK(r1.passed);
  CHECK(std::stod(*r1.find("min_diff_h")) == doctest::Approx(1e-2 * psd.a().matrix().trace().real()));
  for (int k = 1; k <= 6; ++k) CHECK(ktone_check(psd, ToneKind::NegExp, k, g).passed);
  const auto free_a = HermitianPair(HermitianMatrix::diagonal(std::vector<double>{1, -1}),
                                    random_pair({.dim = 2, .seed = 8}).b());
  CHECK(ktone_check(free_a, ToneKind::PosPartPower, 4, g).passed);
  CHECK_THROWS_AS(ktone_check(free_a, ToneKind::PosPartPower, 3, g), Error);

  int failures = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto bad = random_pair({.dim = 3, .seed = 5000 + s});
    const auto r = ktone_check(bad, ToneKind::PosPartPower, 3, g, {.enforce_psd = false});
    CHECK_FALSE(r.gating);
    failures += r.passed ? 0 : 1;
  }
  CHECK(failures >= 1);
}

TEST_CASE("half-plane support") {
  const auto b = random_pair({.dim = 2, .seed = 4}).b();
  const auto mu1 = TracialMeasure::build({HermitianMatrix::identity(2), b});
  for (const auto& r : halfplane_check(mu1, 2000, 1e-8, 1)) CHECK_MESSAGE(r.passed, r.check_name);
  const auto mu2 = TracialMeasure::build({HermitianMatrix::diagonal(std::vector<double>{1, 0}), real_sym(0, 1, 1)});
  for (const auto& r : halfplane_check(mu2, 2000, 1e-8, 2)) CHECK_MESSAGE(r.passed, r.check_name);
  const auto mu3 = TracialMeasure::build({HermitianMatrix::diagonal(std::vector<double>{1, -1}), real_sym(0, 1, 0)});
  CHECK_THROWS_AS(halfplane_check(mu3, 10, 1e-8), Error);
}

TEST_CASE("trace moments match the measure moments") {
  const auto fa = TracialMeasure::build(fixtures::figure_pairs()[0].pair);
  const auto tm = trace_moments(fa.pair(), 3);
  CHECK(tm[0][0] == doctest::Approx(1.5));
  const auto mm = fa.moments(3);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) CHECK(mm[i][j] == doctest::Approx(tm[i][j]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("property suite on fixtures") {
  std::vector<fixtures::NamedPair> fx = fixtures::figure_pairs();
  PropertyConfig cfg;
  cfg.partner = fx[1].pair;
  const auto mu = TracialMeasure::build(fx[0].pair);
  const auto reports = property_suite(mu, cfg);
  int blocks = 0;
  for (const auto& r : reports) {
    CHECK_MESSAGE(r.passed, r.check_name);
    blocks += starts_with(r.check_name, "property.block") ? 1 : 0;
  }
  CHECK(blocks == 4);
  const auto mu_c = TracialMeasure::build(fx[2].pair);
  for (const auto& r : property_suite(mu_c)) CHECK_MESSAGE(r.passed, r.check_name);
}

TEST_CASE("lemmas suite") {
  std::vector<HermitianPair> ps;
  for (const auto& np : fixtures::figure_pairs()) ps.push_back(np.pair);
  const auto reports = lemmas_suite(ps);
  CHECK(reports.size() >= 7);
  for (const auto& r : reports) CHECK_MESSAGE(r.passed, r.check_name);
}

TEST_CASE("report lines round-trip") {
  auto r = VerificationReport::equality("x", 1.0, 1.0 + 1e-9, 1e-6);
  r.seed = 5;
  r.note("k", "v");
  const auto back = parse_report_line(to_json_line(r));
  CHECK(back.check_name == "x");
  CHECK(back.rhs == r.rhs);
  CHECK(back.passed);
  CHECK(back.seed == std::optional<std::uint64_t>(5));
  CHECK(*back.find("k") == "v");
}
