// tracial: analyze a Hermitian pair, render its measure, run verification suites.
//
// Exit codes: 0 ok, 1 parse/usage, 2 degenerate pencil, 3 repeated real root,
// 4 verification failure, 5 I/O.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tracial/errors.hpp"
#include "tracial/io.hpp"
#include "tracial/measure.hpp"
#include "tracial/pencil.hpp"
#include "tracial/raster.hpp"
#include "tracial/report.hpp"
#include "tracial/verify.hpp"

namespace {

using namespace tracial;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitRepeated = 3;
constexpr int kExitVerify = 4;
constexpr int kExitIO = 5;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NotHermitian:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidP:
      return kExitParse;
    case ErrorCode::DegeneratePencil: return kExitDegenerate;
    case ErrorCode::RepeatedRealRoot: return kExitRepeated;
    case ErrorCode::IOError: return kExitIO;
    default: return kExitVerify;
  }
}

struct Options {
  std::string input;
  std::string out;
  std::string csv;
  std::string raster_in;
  std::string grid = "600x600";
  std::string suite = "all";
  std::optional<double> p;
  std::optional<int> k;
  std::uint64_t seed = 0;
  double tol = 1e-4;
};

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw Error(ErrorCode::ParseError, "grid must look like NXxNY");
  try {
    const int nx = std::stoi(s.substr(0, x));
    const int ny = std::stoi(s.substr(x + 1));
    if (nx < 1 || ny < 1) throw Error(ErrorCode::ParseError, "grid counts must be positive");
    return {nx, ny};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "grid must look like NXxNY");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_complex(linalg::Complex z) { return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i"; }

int cmd_analyze(const Options& o) {
  const auto doc = io::load_pair_document(o.input);
  const auto an = pencil::analyze(doc.pair);
  std::cout << "pair " << (doc.name.empty() ? o.input : doc.name) << " n=" << doc.pair.dim() << "\n";
  std::cout << "roots " << an.roots.size() << " min_separation " << fmt(an.min_root_separation) << "\n";
  bool repeated = false;
  for (std::size_t i = 0; i < an.roots.size(); ++i) {
    const auto& r = an.roots[i];
    std::cout << "root " << i << " (" << fmt_complex(r.homog.a) << " : " << fmt_complex(r.homog.b) << ")"
              << " multiplicity " << r.multiplicity << (r.is_real ? " real" : " complex") << "\n";
    if (r.is_real) {
      const auto [a, b] = r.real_direction();
      std::cout << "  singular line through (" << fmt(a) << ", " << fmt(b) << ")\n";
      if (r.multiplicity > 1) repeated = true;
    }
  }
  for (const auto& sp : an.singular_points)
    std::cout << "singular point " << sp.root_index << " (" << fmt(sp.alpha) << ", " << fmt(sp.beta) << ")\n";
  if (repeated) {
    std::cerr << "warning: repeated real root; the measure is only defined after a small perturbation\n";
    return kExitRepeated;
  }
  return kExitOk;
}

int cmd_render(const Options& o) {
  if (o.out.empty() && o.csv.empty()) throw Error(ErrorCode::ParseError, "render needs --out and/or --csv");
  const auto doc = io::load_pair_document(o.input);
  const auto mu = measure::TracialMeasure::build(doc.pair);
  raster::RasterGrid grid;
  if (!o.raster_in.empty()) {
    grid = raster::parse_csv(raster::read_file(o.raster_in));
  } else {
    const auto [nx, ny] = parse_grid(o.grid);
    grid = raster::compute_raster(mu, raster::default_frame(mu), nx, ny, raster::worker_count());
  }
  if (!o.csv.empty()) raster::write_file(o.csv, raster::to_csv(grid));
  if (!o.out.empty()) raster::write_file(o.out, raster::encode_png(raster::colorize(grid, mu.segments())));
  return kExitOk;
}

void emit(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) std::cout << to_json_line(r) << "\n";
}

std::vector<VerificationReport> run_suite(const std::string& suite, const Options& o,
                                          const std::optional<io::PairDocument>& doc) {
  std::vector<VerificationReport> out;
  auto append = [&](std::vector<VerificationReport> rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  auto need_pair = [&]() -> const pencil::HermitianPair& {
    if (!doc) throw Error(ErrorCode::ParseError, "suite " + suite + " needs --input");
    return doc->pair;
  };

  if (suite == "identity") {
    const auto mu = measure::TracialMeasure::build(need_pair());
    const auto fs = verify::default_functions();
    const auto dirs = verify::default_directions();
    append(verify::identity_suite(mu, fs, dirs, o.tol));
  } else if (suite == "hanner") {
    std::vector<double> ps = o.p ? std::vector<double>{*o.p} : std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0};
    std::vector<std::pair<linalg::ComplexMatrix, linalg::ComplexMatrix>> pairs;
    if (doc) pairs.emplace_back(doc->pair.a().matrix(), doc->pair.b().matrix());
    const int n = doc ? doc->pair.dim() : 4;
    pairs.emplace_back(verify::random_complex_matrix(n, 1.0, 2 * o.seed), verify::random_complex_matrix(n, 1.0, 2 * o.seed + 1));
    for (const auto& [a, b] : pairs)
      for (double p : ps) {
        auto r = verify::hanner_check(a, b, p, 1e-10);
        r.seed = o.seed;
        out.push_back(std::move(r));
      }
  } else if (suite == "ktone") {
    std::vector<int> ks;
    if (o.k)
      ks = {*o.k};
    else
      ks = {1, 2, 3, 4, 5, 6};
    std::vector<double> grid;
    for (int i = -4; i <= 4; ++i) grid.push_back(0.25 * i);
    const verify::ToneKind kinds[] = {verify::ToneKind::PosPartPower, verify::ToneKind::Monomial,
                                      verify::ToneKind::Exp, verify::ToneKind::NegExp};
    for (int k : ks)
      for (auto kind : kinds) {
        // BMV sign pattern holds for every k but needs A PSD.
        const bool needs_psd = k % 2 == 1 || kind == verify::ToneKind::NegExp;
        const auto pair = doc ? doc->pair
                              : verify::random_pair({.dim = 3, .seed = o.seed * 100 + static_cast<std::uint64_t>(k),
                                                     .psd_a = needs_psd});
        try {
          if (needs_psd && kind == verify::ToneKind::NegExp &&
              linalg::eigvals_hermitian(pair.a()).front() < -1e-10)
            throw Error(ErrorCode::NotPSD, "BMV needs A PSD");
          auto r = verify::ktone_check(pair, kind, k, grid);
          r.seed = o.seed;
          out.push_back(std::move(r));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NotPSD) throw;
          auto r = VerificationReport::failure("ktone " + verify::tone_name(kind) + " k=" + std::to_string(k), e.what());
          r.gating = false;
          r.note("skipped", "precondition");
          out.push_back(std::move(r));
        }
      }
    // Negative control: k = 3 without the PSD gate.
    const auto bad = verify::random_pair({.dim = 3, .seed = o.seed + 5000});
    auto r = verify::ktone_check(bad, verify::ToneKind::PosPartPower, 3, grid, {.enforce_psd = false});
    r.check_name += " negative-control";
    r.seed = o.seed;
    out.push_back(std::move(r));
  } else if (suite == "properties") {
    const auto mu = measure::TracialMeasure::build(need_pair());
    verify::PropertyConfig cfg;
    cfg.seed = o.seed;
    cfg.tol = o.tol;
    append(verify::property_suite(mu, cfg));
    if (linalg::eigvals_hermitian(mu.pair().a()).front() >= -1e-10 * mu.support_radius())
      append(verify::halfplane_check(mu, 10000, 1e-8, o.seed));
  } else if (suite == "lemmas") {
    std::vector<pencil::HermitianPair> pairs;
    if (doc) pairs.push_back(doc->pair);
    append(verify::lemmas_suite(pairs));
  } else {
    throw Error(ErrorCode::ParseError, "unknown suite " + suite);
  }
  return out;
}

int cmd_verify(const Options& o) {
  std::optional<io::PairDocument> doc;
  if (!o.input.empty()) doc = io::load_pair_document(o.input);
  std::vector<std::string> suites;
  if (o.suite == "all")
    suites = doc ? std::vector<std::string>{"identity", "hanner", "ktone", "properties", "lemmas"}
                 : std::vector<std::string>{"hanner", "ktone", "lemmas"};
  else
    suites = {o.suite};
  std::vector<VerificationReport> reports;
  for (const auto& s : suites) {
    auto rs = run_suite(s, o, doc);
    sort_reports(rs);
    emit(rs);
    for (auto& r : rs) reports.push_back(std::move(r));
  }
  std::size_t failed = 0;
  for (const auto& r : reports)
    if (r.gating && !r.passed) ++failed;
  std::cerr << reports.size() << " checks, " << failed << " gating failures\n";
  return all_gating_passed(reports) ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tracial joint spectral measures of Hermitian pairs"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Pencil roots, singular lines and singular points");
  analyze->add_option("--input", o.input, "Pair document (JSON)")->required();

  auto* render = app.add_subcommand("render", "Rasterize the density to PNG and/or CSV");
  render->add_option("--input", o.input, "Pair document (JSON)")->required();
  render->add_option("--out", o.out, "PNG output path");
  render->add_option("--csv", o.csv, "CSV output path for the raw density");
  render->add_option("--grid", o.grid, "Pixel counts NXxNY")->capture_default_str();
  render->add_option("--raster-in", o.raster_in, "Re-render from a CSV written earlier instead of recomputing");

  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites; one JSON report per line");
  verify_cmd->add_option("--input", o.input, "Pair document (JSON)");
  verify_cmd->add_option("--suite", o.suite, "identity|hanner|ktone|properties|lemmas|all")
      ->check(CLI::IsMember({"identity", "hanner", "ktone", "properties", "lemmas", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--p", o.p, "Schatten exponent for the hanner suite");
  verify_cmd->add_option("--k", o.k, "Derivative order for the ktone suite")->check(CLI::Range(1, 12));
  verify_cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  verify_cmd->add_option("--tol", o.tol, "Tolerance for identity and property checks")->capture_default_str();
  verify_cmd->add_option("--out", o.out, "Also write the reports to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*analyze) return cmd_analyze(o);
    if (*render) return cmd_render(o);
    if (*verify_cmd) {
      if (o.out.empty()) return cmd_verify(o);
      // Tee the report stream.
      std::ostringstream captured;
      auto* old = std::cout.rdbuf(captured.rdbuf());
      int rc;
      try {
        rc = cmd_verify(o);
      } catch (...) {
        std::cout.rdbuf(old);
        throw;
      }
      std::cout.rdbuf(old);
      std::cout << captured.str();
      raster::write_file(o.out, captured.str());
      return rc;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerify;
  }
  return kExitOk;
}
