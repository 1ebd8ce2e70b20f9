#pragma once

#include <span>
#include <string>
#include <vector>

namespace tracial {

enum class FunctionKind { AbsPower, PosPartPower, ExpAffine, WindowTable };

/// Admissible test function f for the identity tr H(f)(xA + yB) = ∫ f(ax + by) dμ.
///
/// Built-in families:
///   abs_power(p)       |t|^p
///   pos_part_power(k)  t_+^(k-1)
///   exp_affine(c)      e^(ct) - 1
///   window_table(t, v) piecewise-linear interpolant of the samples, 0 outside [t.front(), t.back()]
///
/// A spec carries a certificate that ∫ |f(t)/t| dt is finite near 0. Specs
/// outside the admissible range (p <= 0, k == 1, a table that does not vanish
/// on a neighbourhood of 0) can still be built and evaluated, but carry no
/// certificate and are refused by integration and the H transform.
class FunctionSpec {
 public:
  static FunctionSpec abs_power(double p);
  static FunctionSpec pos_part_power(int k);
  static FunctionSpec exp_affine(double c);
  static FunctionSpec window_table(std::vector<double> nodes, std::vector<double> values);

  FunctionKind kind() const { return kind_; }
  /// p, k or c; 0 for tables.
  double parameter() const { return param_; }
  bool integrable_at_zero() const { return !certificate_.empty(); }
  /// Why ∫ |f(t)/t| converges at 0; empty when uncertified.
  const std::string& certificate() const { return certificate_; }

  double operator()(double t) const;

  /// Points where f fails to be smooth. Powers report 0; tables their nodes.
  std::span<const double> kinks() const { return kinks_; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> values() const { return values_; }

  std::string describe() const;

 private:
  FunctionSpec() = default;

  FunctionKind kind_ = FunctionKind::AbsPower;
  double param_ = 0.0;
  int int_param_ = 0;
  std::string certificate_;
  std::vector<double> kinks_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

}  // namespace tracial
