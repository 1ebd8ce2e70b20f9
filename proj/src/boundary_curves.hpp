#pragma once

// The density of μ is positive exactly where the pencil rI - Q(θ) - μP(θ)
// has non-real eigenvalues μ. Along a ray this set changes only where the
// ray crosses one of the curves
//     ψ ↦ (<A v_i(ψ), v_i(ψ)>, <B v_i(ψ), v_i(ψ)>),   ψ ∈ [0, π],
// with v_i(ψ) the eigenvectors of cos ψ A + sin ψ B, and there the density
// has square-root edges. The curves are sampled once per pair.

#include <vector>

#include "tracial/linalg.hpp"
#include "tracial/pencil.hpp"

namespace tracial::measure::detail {

struct BoundaryCurves {
  int n = 0;
  linalg::ComplexMatrix a;
  linalg::ComplexMatrix b;
  std::vector<double> psi;
  // Column i of vectors[k] continues curve i from sample k - 1.
  std::vector<linalg::ComplexMatrix> vectors;
  std::vector<double> alpha;  // [k * n + i]
  std::vector<double> beta;

  static BoundaryCurves build(const pencil::HermitianPair& pair);

  /// Radii r > 0 where the ray at angle theta meets a curve, unsorted.
  void ray_crossings(double theta, std::vector<double>& out) const;
};

}  // namespace tracial::measure::detail
