#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tracial/linalg.hpp"
#include "tracial/report.hpp"

namespace tracial::pencil {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

/// The pair (A, B) of equal-dimension Hermitian matrices.
class HermitianPair {
 public:
  HermitianPair(HermitianMatrix a, HermitianMatrix b);

  const HermitianMatrix& a() const { return a_; }
  const HermitianMatrix& b() const { return b_; }
  int dim() const { return a_.dim(); }
  double norm_a() const { return norm_a_; }
  double norm_b() const { return norm_b_; }
  /// ||A|| + ||B||; bounds |a| + |b| on the support of the measure.
  double norm_sum() const { return norm_a_ + norm_b_; }

  /// x*A + y*B.
  HermitianMatrix combination(double x, double y) const { return a_.combine(x, b_, y); }
  /// The pencil matrix b*A - a*B at a real point.
  HermitianMatrix pencil_at(double a, double b) const { return a_.combine(b, b_, -a); }

  /// V(A, B) = (v11 A + v12 B, v21 A + v22 B).
  HermitianPair transformed(double v11, double v12, double v21, double v22) const;
  HermitianPair conjugated(const ComplexMatrix& u) const;
  /// Block-diagonal pair diag(A, A2), diag(B, B2).
  HermitianPair direct_sum(const HermitianPair& other) const;

 private:
  HermitianMatrix a_;
  HermitianMatrix b_;
  double norm_a_ = 0.0;
  double norm_b_ = 0.0;
};

/// Point (a : b) of CP^1 with |a|^2 + |b|^2 = 1 and its first nonzero
/// coordinate real and positive.
struct ProjectivePoint {
  Complex a;
  Complex b;

  static ProjectivePoint normalized(Complex a, Complex b);
};

/// |a1 b2 - a2 b1| for normalized points: sine of half the sphere angle.
double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);
/// Chordal distance from p to the real circle RP^1.
double distance_to_real(const ProjectivePoint& p);

struct PencilRoot {
  ProjectivePoint homog;
  int multiplicity = 1;
  bool is_real = false;
  /// Unit kernel vector of b*A - a*B; present iff the root is simple. Its
  /// phase is arbitrary and never observable through the public results.
  std::optional<ComplexVector> eigenvector;

  /// Real direction (a, b) of a real root as a unit vector of R^2.
  std::pair<double, double> real_direction() const { return {homog.a.real(), homog.b.real()}; }
};

struct SingularPoint {
  double alpha = 0.0;  // <Av, v>
  double beta = 0.0;   // <Bv, v>
  std::size_t root_index = 0;
};

struct PencilAnalysis {
  std::vector<PencilRoot> roots;
  std::vector<SingularPoint> singular_points;
  bool nondegenerate = false;
  bool distinct_real_roots = false;
  /// Smallest chordal separation between two distinct roots (1 if n == 1).
  double min_root_separation = 1.0;
  /// Direction angle used to make the pencil invertible.
  double pivot_angle = 0.0;
};

struct AnalyzeOptions {
  /// Realness: chordal distance to RP^1 <= real_tol * (1 + ||A|| + ||B||).
  double real_tol = 1e-8;
  /// Roots closer than this in the chordal metric are merged.
  double merge_tol = 1e-6;
  int angle_grid = 64;
};

/// Throws DegeneratePencil when det(bA - aB) vanishes identically.
PencilAnalysis analyze(const HermitianPair& pair, const AnalyzeOptions& opts = {});

/// det(zI + xA + yB).
double kippenhahn(const HermitianPair& pair, double x, double y, double z);

struct DynamicsOptions {
  /// First coordinate a at which C1 and C2 are probed, in units of the signed
  /// singular-point radius <A'v, v>; must avoid 1 (where the C1 prediction is 0).
  double a_over_alpha = 0.5;
  /// Relative errors below this count as exact and are excluded from fits.
  double exact_floor = 1e-13;
};

/// Checks the big-eigenvalue asymptotics of C1 and C2 next to a simple real
/// root after rotating the root to (1 : 0). Passes when the fitted orders are
/// at least 0.9 for C2 and 0.9/n for C1. Throws RepeatedRealRoot for a
/// multiple root and InvalidArgument for a non-real root.
VerificationReport eigen_dynamics_check(const HermitianPair& pair, const PencilRoot& root,
                                        std::span<const double> offsets, const DynamicsOptions& opts = {});

/// Least-squares slope of log(err) against log(offset).
double fitted_order(std::span<const double> offsets, std::span<const double> errors);

}  // namespace tracial::pencil
