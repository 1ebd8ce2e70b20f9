#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tracial/function_spec.hpp"
#include "tracial/linalg.hpp"
#include "tracial/pencil.hpp"

namespace tracial::measure {

namespace detail {
struct BoundaryCurves;
}

using linalg::ComplexMatrix;
using pencil::HermitianPair;
using pencil::PencilAnalysis;

/// t ↦ (alpha t, beta t), t ∈ (0, 1], carrying the weight (1 - t)/t dt.
struct SingularSegment {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t root_index = 0;

  std::pair<double, double> point(double t) const { return {alpha * t, beta * t}; }
};

struct QuadratureOptions {
  double abs_tol = 1e-6;
  double rel_tol = 1e-6;
  std::size_t max_angular_panels = 4000;
  std::size_t max_radial_panels = 400;
  /// Angles closer than this to a singular line are evaluated at this distance.
  double line_exclusion = 1e-10;
  /// Radial tolerance as a fraction of the angular one.
  double inner_fraction = 0.1;
};

struct IntegrationTask {
  FunctionSpec f;
  double x = 0.0;
  double y = 0.0;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;  // estimate, continuous + singular
  double continuous = 0.0;
  double singular = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;  // density evaluations shared by the batch
};

/// (I - (aA + bB)/(a² + b²)) (bA - aB)^{-1}. Throws OriginUndefined at (0, 0)
/// and SingularMatrix on a singular line.
ComplexMatrix c1_matrix(const HermitianPair& pair, double a, double b);

/// One segment per simple real root. Throws RepeatedRealRoot if a real root
/// is multiple.
std::vector<SingularSegment> singular_segments(const HermitianPair& pair, const PencilAnalysis& analysis);

/// μ_{A,B} = density · m₂ + Σ segments. Immutable; all queries are reentrant.
class TracialMeasure {
 public:
  /// Throws DegeneratePencil or RepeatedRealRoot.
  static TracialMeasure build(const HermitianPair& pair, const pencil::AnalyzeOptions& opts = {});

  const HermitianPair& pair() const { return pair_; }
  const PencilAnalysis& analysis() const { return analysis_; }
  const std::vector<SingularSegment>& segments() const { return segments_; }
  /// ||A|| + ||B||; supp μ ⊆ {|a| + |b| <= support_radius}.
  double support_radius() const { return support_radius_; }

  /// Density with respect to Lebesgue measure. +inf on a singular line, 0
  /// outside the support. Throws OriginUndefined at (0, 0).
  double density(double a, double b) const;
  /// The eigenvalue formula without the support cutoff; used to check that
  /// the cutoff discards nothing.
  double density_formula(double a, double b) const;

  /// ∫ f(ax + by) dμ. Throws NonIntegrable for an uncertified f and
  /// QuadratureFailure when the tolerance is not met.
  IntegrationResult integrate(const FunctionSpec& f, double x, double y, const QuadratureOptions& opts = {}) const;

  /// Shares density evaluations across tasks. Unconverged tasks are flagged,
  /// not thrown. Throws NonIntegrable for an uncertified task.
  std::vector<IntegrationResult> integrate_batch(std::span<const IntegrationTask> tasks,
                                                 const QuadratureOptions& opts = {}) const;

  /// ∫ a^i b^j (a² + b²) dμ. Throws QuadratureFailure.
  double moment(int i, int j, const QuadratureOptions& opts = {}) const;

  /// All moments with i + j <= max_degree in one batch, indexed [i][j].
  std::vector<std::vector<double>> moments(int max_degree, const QuadratureOptions& opts = {}) const;

 private:
  struct Job;
  std::vector<IntegrationResult> run(std::span<const Job> jobs, const QuadratureOptions& opts) const;

  HermitianPair pair_;
  PencilAnalysis analysis_;
  std::vector<SingularSegment> segments_;
  double support_radius_ = 0.0;
  std::vector<double> singular_angles_;  // direction of each real root in [0, pi)
  std::shared_ptr<const detail::BoundaryCurves> curves_;

  TracialMeasure(HermitianPair pair, PencilAnalysis analysis);
};

}  // namespace tracial::measure
