#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tracial {

/// Outcome of one numerical check. For identities abs_err = |lhs - rhs|; for
/// one-sided inequalities (lhs <= rhs expected) abs_err is the violation
/// max(0, lhs - rhs). In both cases passed == (abs_err <= tol || rel_err <= tol).
struct VerificationReport {
  std::string check_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool passed = false;
  std::optional<std::uint64_t> seed;
  /// Negative controls are expected to fail and are excluded from gating.
  bool gating = true;
  std::vector<std::pair<std::string, std::string>> metadata;

  static VerificationReport equality(std::string name, double lhs, double rhs, double tol);
  static VerificationReport upper_bound(std::string name, double lhs, double rhs, double tol);
  /// A check that could not produce both sides (e.g. quadrature failure).
  static VerificationReport failure(std::string name, std::string reason);

  VerificationReport& note(std::string key, std::string value);
  VerificationReport& note(std::string key, double value);
  std::optional<std::string> find(std::string_view key) const;
};

/// One JSON object per line; inverse of parse_report_line.
std::string to_json_line(const VerificationReport& r);
VerificationReport parse_report_line(std::string_view line);

/// Reports are emitted sorted by (check_name, seed).
void sort_reports(std::vector<VerificationReport>& reports);

bool all_gating_passed(const std::vector<VerificationReport>& reports);

}  // namespace tracial
