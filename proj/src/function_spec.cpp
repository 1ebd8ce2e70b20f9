#include "tracial/function_spec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tracial/errors.hpp"

namespace tracial {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// True when the interpolant vanishes on an open interval around 0.
bool table_vanishes_near_zero(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.front() > 0.0 || t.back() < 0.0) return true;
  const auto it = std::upper_bound(t.begin(), t.end(), 0.0);
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  // t[hi - 1] <= 0 < t[hi] when hi < size.
  const std::size_t lo = hi - 1;
  auto value = [&](std::ptrdiff_t i) { return (i < 0 || i >= static_cast<std::ptrdiff_t>(v.size())) ? 0.0 : v[static_cast<std::size_t>(i)]; };
  const auto ilo = static_cast<std::ptrdiff_t>(lo);
  if (t[lo] == 0.0) {
    // An endpoint node at 0 jumps to the zero extension unless its value is 0.
    return value(ilo - 1) == 0.0 && value(ilo) == 0.0 && value(ilo + 1) == 0.0;
  }
  return value(ilo) == 0.0 && value(ilo + 1) == 0.0;
}

}  // namespace

FunctionSpec FunctionSpec::abs_power(double p) {
  if (!std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "abs_power: exponent must be finite");
  FunctionSpec f;
  f.kind_ = FunctionKind::AbsPower;
  f.param_ = p;
  f.kinks_ = {0.0};
  if (p > 0.0) f.certificate_ = "|f(t)/t| = |t|^(p-1) with p > 0";
  return f;
}

FunctionSpec FunctionSpec::pos_part_power(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "pos_part_power: k must be at least 1");
  FunctionSpec f;
  f.kind_ = FunctionKind::PosPartPower;
  f.param_ = k;
  f.int_param_ = k;
  f.kinks_ = {0.0};
  if (k >= 2) f.certificate_ = "|f(t)/t| = t_+^(k-2) with k >= 2";
  return f;
}

FunctionSpec FunctionSpec::exp_affine(double c) {
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "exp_affine: rate must be finite");
  FunctionSpec f;
  f.kind_ = FunctionKind::ExpAffine;
  f.param_ = c;
  f.certificate_ = "|e^(ct) - 1| <= |c t| e^(|c t|)";
  return f;
}

FunctionSpec FunctionSpec::window_table(std::vector<double> nodes, std::vector<double> values) {
  if (nodes.size() < 2 || nodes.size() != values.size())
    throw Error(ErrorCode::InvalidArgument, "window_table: need at least two samples of matching length");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i]))
      throw Error(ErrorCode::NonFinite, "window_table: non-finite sample");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "window_table: nodes must increase strictly");
  }
  FunctionSpec f;
  f.kind_ = FunctionKind::WindowTable;
  f.kinks_ = nodes;
  if (table_vanishes_near_zero(nodes, values)) f.certificate_ = "table vanishes on a neighbourhood of 0";
  f.nodes_ = std::move(nodes);
  f.values_ = std::move(values);
  return f;
}

double FunctionSpec::operator()(double t) const {
  switch (kind_) {
    case FunctionKind::AbsPower:
      return std::pow(std::abs(t), param_);
    case FunctionKind::PosPartPower: {
      if (t <= 0.0) return 0.0;
      double r = 1.0;
      for (int i = 1; i < int_param_; ++i) r *= t;
      return r;
    }
    case FunctionKind::ExpAffine:
      return std::expm1(param_ * t);
    case FunctionKind::WindowTable: {
      if (t < nodes_.front() || t > nodes_.back()) return 0.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      if (it == nodes_.end()) return values_.back();
      const std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
      const std::size_t lo = hi - 1;
      const double w = (t - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
      return values_[lo] + w * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;
}

std::string FunctionSpec::describe() const {
  switch (kind_) {
    case FunctionKind::AbsPower:
      return "|t|^" + fmt(param_);
    case FunctionKind::PosPartPower:
      return "t_+^" + std::to_string(int_param_ - 1);
    case FunctionKind::ExpAffine:
      return "exp(" + fmt(param_) + " t) - 1";
    case FunctionKind::WindowTable:
      return "table[" + std::to_string(nodes_.size()) + "]";
  }
  return "?";
}

}  // namespace tracial
