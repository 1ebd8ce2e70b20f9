#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracial/function_spec.hpp"
#include "tracial/linalg.hpp"
#include "tracial/measure.hpp"
#include "tracial/pencil.hpp"
#include "tracial/report.hpp"

namespace tracial::verify {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using measure::TracialMeasure;
using pencil::HermitianPair;

struct RandomPairConfig {
  int dim = 3;
  double scale = 1.0;
  std::uint64_t seed = 0;
  /// Shift A by (|λmin| + 1e-6 scale) I when it has a negative eigenvalue.
  bool psd_a = false;
  bool ensure_distinct_roots = true;
  /// Regeneration cap when ensure_distinct_roots is set.
  int max_attempts = 100;
};

/// (G + G^*)/2 with i.i.d. standard complex Gaussian G, times scale.
/// Deterministic per seed; throws GenerationFailure after max_attempts.
HermitianPair random_pair(const RandomPairConfig& config);

/// Matrix of i.i.d. standard complex Gaussians times scale.
ComplexMatrix random_complex_matrix(int n, double scale, std::uint64_t seed);
/// Haar-distributed unitary (QR of a Gaussian matrix with phases fixed).
ComplexMatrix random_unitary(int n, std::uint64_t seed);

/// Σ H(f)(λ_i(xA + yB)) from the Hermitian spectrum; never touches the
/// measure quadrature.
double trace_h(const HermitianPair& pair, const FunctionSpec& f, double x, double y);

/// lhs = trace_h, rhs = measure integral. A quadrature failure becomes a
/// failed report.
VerificationReport identity_check(const TracialMeasure& mu, const FunctionSpec& f, double x, double y, double tol,
                                  const measure::QuadratureOptions& opts = {});

/// One report per (f, direction), sharing density evaluations. A direction
/// is a pair (x, y).
std::vector<VerificationReport> identity_suite(const TracialMeasure& mu, std::span<const FunctionSpec> functions,
                                               std::span<const std::pair<double, double>> directions, double tol,
                                               const measure::QuadratureOptions& opts = {});

/// tr|xA + yB|^p against p(p+1) ∫ |ax + by|^p dμ.
VerificationReport schatten_identity_check(const TracialMeasure& mu, double p, double x, double y, double tol,
                                           const measure::QuadratureOptions& opts = {});

/// Eight unit directions at odd multiples of π/8.
std::vector<std::pair<double, double>> default_directions();
/// |t|^p for p in {1, 2, 2.5, 3, 4} and t_+^(k-1) for k in {2, 3, 4}.
std::vector<FunctionSpec> default_functions();

/// 2^(-1/p) [[0, M], [M^*, 0]]; its Schatten p-norm equals that of M.
HermitianMatrix hermitian_dilation(const ComplexMatrix& m, double p);

/// Schatten-norm Hanner inequality for arbitrary complex A, B. For p >= 2
/// checks ||A+B||^p + ||A-B||^p <= (||A|| + ||B||)^p + | ||A|| - ||B|| |^p;
/// for 1 <= p < 2 the reversed inequality, a consequence of the tracial
/// embedding and the L_p Hanner inequality; those reports carry
/// status = "derived, not stated".
/// tol applies to the violation, absolute or relative. Throws InvalidP for p < 1.
VerificationReport hanner_check(const ComplexMatrix& a, const ComplexMatrix& b, double p, double tol);

enum class ToneKind {
  PosPartPower,  // t_+^(k-1)
  Monomial,      // t^k
  Exp,           // e^t
  NegExp,        // (-1)^k e^(-t), the BMV sign convention
};

std::string tone_name(ToneKind kind);

struct ToneOptions {
  double h = 1e-2;
  /// Violations are measured against max |F| over all stencil points.
  double tol = 1e-8;
  /// False for negative controls, whose preconditions are deliberately broken.
  bool enforce_psd = true;
};

/// k-th forward differences of F(t) = tr f(tA + B) over t_grid at steps h and
/// h/2. Passes when every difference is >= -tol max|F|. Throws NotPSD when k
/// is odd, A has an eigenvalue below -1e-10 and opts.enforce_psd is set.
VerificationReport ktone_check(const HermitianPair& pair, ToneKind kind, int k, std::span<const double> t_grid,
                               const ToneOptions& opts = {});

/// Density samples on {a <= -1e-3 scale, |a| + |b| <= ||A|| + ||B||} and the
/// segment endpoints. Returns the density report then the segment report.
/// Throws NotPSD when A has an eigenvalue below -1e-10 scale.
std::vector<VerificationReport> halfplane_check(const TracialMeasure& mu, int sample_count, double tol,
                                                std::uint64_t seed = 0);

struct PropertyConfig {
  std::uint64_t seed = 0;
  double tol = 1e-4;
  /// Pushforward matrix; rotation by 30 degrees when absent.
  std::optional<std::array<double, 4>> v;
  /// Second block for additivity; a random 2x2 pair when absent.
  std::optional<HermitianPair> partner;
  int moment_degree = 3;
  int support_samples = 2000;
  measure::QuadratureOptions quadrature = {};
};

/// Pushforward, unitary invariance, block additivity, support and moment
/// checks, each with f = |t|^3 at four directions.
std::vector<VerificationReport> property_suite(const TracialMeasure& mu, const PropertyConfig& config = {});

/// ∫ a^i b^j (a² + b²) dμ for i + j <= degree from traces of words in A and
/// B, indexed [i][j].
std::vector<std::vector<double>> trace_moments(const HermitianPair& pair, int degree);

/// I1 and I2 closed forms against quadrature, their large-M limits, and the
/// eigenvalue dynamics check at every simple real root of the given pairs.
std::vector<VerificationReport> lemmas_suite(std::span<const HermitianPair> pairs = {});

}  // namespace tracial::verify
