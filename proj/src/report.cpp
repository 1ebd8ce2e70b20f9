#include "tracial/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "tracial/errors.hpp"

namespace tracial {

namespace {

double relative(double err, double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / scale;
}

void finish(VerificationReport& r) {
  if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
    r.passed = false;
    return;
  }
  r.passed = r.abs_err <= r.tol || r.rel_err <= r.tol;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no inf/nan; encode them as strings.
nlohmann::json encode(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

VerificationReport VerificationReport::equality(std::string name, double lhs, double rhs, double tol) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = relative(r.abs_err, lhs, rhs);
  r.metadata.emplace_back("relation", "==");
  finish(r);
  return r;
}

VerificationReport VerificationReport::upper_bound(std::string name, double lhs, double rhs, double tol) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.abs_err = std::max(0.0, lhs - rhs);
  r.rel_err = relative(r.abs_err, lhs, rhs);
  r.metadata.emplace_back("relation", "<=");
  finish(r);
  return r;
}

VerificationReport VerificationReport::failure(std::string name, std::string reason) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.lhs = std::numeric_limits<double>::quiet_NaN();
  r.rhs = std::numeric_limits<double>::quiet_NaN();
  r.abs_err = std::numeric_limits<double>::infinity();
  r.rel_err = std::numeric_limits<double>::infinity();
  r.passed = false;
  r.metadata.emplace_back("error", std::move(reason));
  return r;
}

VerificationReport& VerificationReport::note(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
  return *this;
}

VerificationReport& VerificationReport::note(std::string key, double value) {
  return note(std::move(key), format_double(value));
}

std::optional<std::string> VerificationReport::find(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

std::string to_json_line(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check_name;
  j["lhs"] = encode(r.lhs);
  j["rhs"] = encode(r.rhs);
  j["abs_err"] = encode(r.abs_err);
  j["rel_err"] = encode(r.rel_err);
  j["tol"] = encode(r.tol);
  j["passed"] = r.passed;
  j["gating"] = r.gating;
  if (r.seed) j["seed"] = *r.seed;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j.dump();
}

VerificationReport parse_report_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  VerificationReport r;
  try {
    r.check_name = j.at("check").get<std::string>();
    r.lhs = decode(j.at("lhs"));
    r.rhs = decode(j.at("rhs"));
    r.abs_err = decode(j.at("abs_err"));
    r.rel_err = decode(j.at("rel_err"));
    r.tol = decode(j.at("tol"));
    r.passed = j.at("passed").get<bool>();
    r.gating = j.value("gating", true);
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("metadata"))
      for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it)
        r.metadata.emplace_back(it.key(), it.value().get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return r;
}

void sort_reports(std::vector<VerificationReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.check_name != b.check_name) return a.check_name < b.check_name;
    return a.seed.value_or(0) < b.seed.value_or(0);
  });
}

bool all_gating_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return !r.gating || r.passed; });
}

}  // namespace tracial
