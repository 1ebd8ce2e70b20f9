#pragma once

// Globally adaptive, vector-valued Gauss-Kronrod (7, 15) quadrature.
// Every component shares the same abscissae so one expensive evaluation
// (a density) serves a whole batch of integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace tracial::quad {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights pair with the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr int kRulePoints = 15;

/// Maps a rule index 0..14 to the abscissa in [-1, 1].
inline double rule_node(int i) {
  return i < 7 ? -kKronrodNodes[static_cast<std::size_t>(i)]
               : (i == 7 ? 0.0 : kKronrodNodes[static_cast<std::size_t>(14 - i)]);
}

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  int depth = 0;
  std::vector<double> value;  // per component
  std::vector<double> error;
  std::vector<double> l1;  // ∫ |f| estimate
};

struct Tolerance {
  std::span<const double> abs;  // per component
  double rel = 0.0;
  /// Relative part measured against ∫|f| instead of |∫ f|.
  bool relative_to_l1 = false;
};

struct Limits {
  std::size_t max_panels = 2000;
  int max_depth = 60;
};

struct VectorResult {
  std::vector<double> value;
  std::vector<double> error;
  std::vector<double> l1;
  std::vector<char> converged;
  std::size_t evaluations = 0;
};

/// Applies the rule on [lo, hi]. `eval(x, out)` writes m components; the
/// buffer `fx` holds 15 * m scratch values.
template <class Eval>
void apply_rule(Eval& eval, Panel& p, std::size_t m, std::vector<double>& fx) {
  const double c = 0.5 * (p.lo + p.hi);
  const double h = 0.5 * (p.hi - p.lo);
  fx.resize(kRulePoints * m);
  for (int i = 0; i < kRulePoints; ++i) eval(c + h * rule_node(i), fx.data() + static_cast<std::size_t>(i) * m);
  p.value.assign(m, 0.0);
  p.error.assign(m, 0.0);
  p.l1.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double kr = 0.0, ga = 0.0, ab = 0.0;
    for (int i = 0; i < kRulePoints; ++i) {
      const int j = i < 7 ? i : 14 - i;
      const double w = kKronrodWeights[static_cast<std::size_t>(j)];
      const double v = fx[static_cast<std::size_t>(i) * m + k];
      kr += w * v;
      ab += w * std::abs(v);
      if (j % 2 == 1) ga += kGaussWeights[static_cast<std::size_t>(j / 2)] * v;
    }
    const double mean = 0.5 * kr;
    double asc = 0.0;
    for (int i = 0; i < kRulePoints; ++i) {
      const int j = i < 7 ? i : 14 - i;
      asc += kKronrodWeights[static_cast<std::size_t>(j)] * std::abs(fx[static_cast<std::size_t>(i) * m + k] - mean);
    }
    kr *= h;
    ga *= h;
    ab *= std::abs(h);
    asc *= std::abs(h);
    // QUADPACK error scaling of |K15 - G7|.
    double err = std::abs(kr - ga);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (ab > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * ab);
    p.value[k] = kr;
    p.error[k] = err;
    p.l1[k] = ab;
  }
}

/// Integrates m components over the union of [breaks[i], breaks[i+1]].
template <class Eval>
VectorResult integrate(Eval&& eval, std::span<const double> breaks, std::size_t m, const Tolerance& tol,
                       const Limits& limits = {}) {
  VectorResult out;
  out.value.assign(m, 0.0);
  out.error.assign(m, 0.0);
  out.l1.assign(m, 0.0);
  out.converged.assign(m, 1);
  if (m == 0 || breaks.size() < 2) return out;

  std::vector<double> fx;
  std::vector<Panel> panels;
  panels.reserve(std::min<std::size_t>(limits.max_panels + breaks.size(), 4096));
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p;
    p.lo = breaks[i];
    p.hi = breaks[i + 1];
    apply_rule(eval, p, m, fx);
    out.evaluations += kRulePoints;
    panels.push_back(std::move(p));
  }

  auto totals = [&]() {
    std::fill(out.value.begin(), out.value.end(), 0.0);
    std::fill(out.error.begin(), out.error.end(), 0.0);
    std::fill(out.l1.begin(), out.l1.end(), 0.0);
    for (const Panel& p : panels)
      for (std::size_t k = 0; k < m; ++k) {
        out.value[k] += p.value[k];
        out.error[k] += p.error[k];
        out.l1[k] += p.l1[k];
      }
  };
  auto target = [&](std::size_t k) {
    const double ref = tol.relative_to_l1 ? out.l1[k] : std::abs(out.value[k]);
    return std::max(tol.abs[k], tol.rel * ref);
  };

  std::vector<double> goal(m);
  while (true) {
    totals();
    bool done = true;
    for (std::size_t k = 0; k < m; ++k) {
      goal[k] = target(k);
      if (out.error[k] > goal[k]) done = false;
    }
    if (done || panels.size() >= limits.max_panels) break;

    // Refine the panel carrying the largest share of any unmet budget.
    std::size_t worst = panels.size();
    double worst_score = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (panels[i].depth >= limits.max_depth) continue;
      double score = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (out.error[k] <= goal[k]) continue;
        const double g = goal[k] > 0.0 ? goal[k] : std::numeric_limits<double>::min();
        score = std::max(score, panels[i].error[k] / g);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    if (worst == panels.size()) break;

    Panel& p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) {
      p.depth = limits.max_depth;
      continue;
    }
    Panel left, right;
    left.lo = p.lo;
    left.hi = mid;
    right.lo = mid;
    right.hi = p.hi;
    left.depth = right.depth = p.depth + 1;
    apply_rule(eval, left, m, fx);
    apply_rule(eval, right, m, fx);
    out.evaluations += 2 * kRulePoints;
    p = std::move(left);
    panels.push_back(std::move(right));
  }
  for (std::size_t k = 0; k < m; ++k) out.converged[k] = out.error[k] <= goal[k] ? 1 : 0;
  return out;
}

}  // namespace tracial::quad
