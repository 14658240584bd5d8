#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splashcert/errors.hpp"
#include "splashcert/finite_difference.hpp"
#include "splashcert/vec2.hpp"

namespace splashcert {

inline constexpr double kPi = std::numbers::pi;

enum class DomainKind { periodic, real_line };

/// A sampled graph x2 = f(x1) on a uniform grid.
///
/// Periodic interfaces live on [-pi, pi) with step 2*pi/N. Truncated
/// real-line interfaces cover [-A, A) with step 2A/N; the right endpoint is
/// left open so that an even node count places a sample exactly at the
/// origin, where the symmetric scenarios attain their minimum gap. Real-line
/// interfaces carry the far-field limit used to clamp evaluations outside
/// the sampled window.
///
/// Instances are immutable snapshots; all operations on them are pure.
class GraphInterface {
 public:
  static GraphInterface periodic(std::vector<double> values) {
    GraphInterface g;
    g.domain_ = DomainKind::periodic;
    g.half_width_ = kPi;
    g.far_field_ = std::numeric_limits<double>::quiet_NaN();
    g.init(std::move(values));
    return g;
  }

  static GraphInterface real_line(std::vector<double> values, double half_width,
                                  double far_field) {
    if (!(half_width > 0.0)) throw ConfigError("GraphInterface: half width must be positive");
    if (!std::isfinite(far_field)) throw ConfigError("GraphInterface: far field must be finite");
    GraphInterface g;
    g.domain_ = DomainKind::real_line;
    g.half_width_ = half_width;
    g.far_field_ = far_field;
    g.init(std::move(values));
    return g;
  }

  DomainKind domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  double grid_step() const { return step_; }
  double half_width() const { return half_width_; }
  double far_field() const { return far_field_; }
  double node(std::size_t j) const { return -half_width_ + step_ * static_cast<double>(j); }
  double value(std::size_t j) const { return values_[j]; }
  const std::vector<double>& values() const { return values_; }

  bool same_grid(const GraphInterface& other) const {
    return domain_ == other.domain_ && values_.size() == other.values_.size() &&
           half_width_ == other.half_width_;
  }

  /// Real-line data must have settled onto its far-field limit at the two
  /// outermost nodes before it is used in a truncated-domain integral.
  void require_far_field_decay(double tol = 1e-6) const {
    if (domain_ != DomainKind::real_line) return;
    const double lo = std::abs(values_.front() - far_field_);
    const double hi = std::abs(values_.back() - far_field_);
    if (lo > tol || hi > tol)
      throw ConfigError("GraphInterface: values do not reach the far field at the window edges"
                        " (|f-f_inf| = " + std::to_string(std::max(lo, hi)) + ")");
  }

 private:
  void init(std::vector<double> values) {
    if (values.size() < 16) throw ConfigError("GraphInterface: need at least 16 nodes");
    for (double v : values)
      if (!std::isfinite(v)) throw ConfigError("GraphInterface: non-finite sample");
    values_ = std::move(values);
    step_ = 2.0 * half_width_ / static_cast<double>(values_.size());
  }

  DomainKind domain_ = DomainKind::periodic;
  double half_width_ = kPi;
  double far_field_ = 0.0;
  double step_ = 0.0;
  std::vector<double> values_;
};

/// A closed curve sampled at uniform parameters on [-pi, pi),
/// counterclockwise.
class ClosedContour {
 public:
  static ClosedContour from_samples(std::vector<double> x1, std::vector<double> x2) {
    if (x1.size() != x2.size()) throw ConfigError("ClosedContour: component size mismatch");
    if (x1.size() < 16) throw ConfigError("ClosedContour: need at least 16 nodes");
    for (std::size_t j = 0; j < x1.size(); ++j)
      if (!std::isfinite(x1[j]) || !std::isfinite(x2[j]))
        throw ConfigError("ClosedContour: non-finite sample");
    ClosedContour c;
    c.x1_ = std::move(x1);
    c.x2_ = std::move(x2);
    return c;
  }

  std::size_t size() const { return x1_.size(); }
  double grid_step() const { return 2.0 * kPi / static_cast<double>(size()); }
  double node(std::size_t j) const { return -kPi + grid_step() * static_cast<double>(j); }
  Vec2 point(std::size_t j) const { return {x1_[j], x2_[j]}; }
  const std::vector<double>& x1() const { return x1_; }
  const std::vector<double>& x2() const { return x2_; }

  /// Simplicity at sample resolution: every pair of nodes more than one
  /// parameter step apart must be strictly separated.
  void require_simple() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent across the wrap
        if ((point(i) - point(j)).norm_sq() == 0.0)
          throw SplashError("ClosedContour: nodes coincide (self-intersection at sample resolution)");
      }
    }
  }

 private:
  std::vector<double> x1_, x2_;
};

enum class DensityOrdering { stable_required, unordered };

/// Two graph interfaces (f above g) and the three phase densities.
struct PhasePair {
  GraphInterface f;
  GraphInterface g;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;

  double zeta21() const { return (zeta2 - zeta1) / (2.0 * kPi); }
  double zeta32() const { return (zeta3 - zeta2) / (2.0 * kPi); }

  /// Muskat mode requires the stable density ordering; SQG mode does not.
  /// f > g must hold at every node in either mode.
  void validate(DensityOrdering ordering) const {
    if (!f.same_grid(g)) throw GridMismatchError("PhasePair: f and g sampled on different grids");
    if (ordering == DensityOrdering::stable_required && !(zeta1 < zeta2 && zeta2 < zeta3))
      throw ConfigError("PhasePair: densities must satisfy zeta1 < zeta2 < zeta3");
    for (std::size_t j = 0; j < f.size(); ++j)
      if (!(f.value(j) > g.value(j)))
        throw SplashError("PhasePair: phases touch (f <= g at alpha = " +
                          std::to_string(f.node(j)) + ")");
  }
};

struct SupNorms {
  double value = 0.0;
  double deriv1 = 0.0;
  double deriv2 = 0.0;
};

/// Sup norms of the samples and of their discrete first/second derivatives.
inline SupNorms sup_norms(const GraphInterface& iface) {
  if (iface.size() < 5) throw NumericalError("sup_norms: insufficient resolution");
  const bool periodic = iface.domain() == DomainKind::periodic;
  const auto d1 = derivative_samples(iface.values(), iface.grid_step(), periodic, 1);
  const auto d2 = derivative_samples(iface.values(), iface.grid_step(), periodic, 2);
  SupNorms s;
  for (std::size_t j = 0; j < iface.size(); ++j) {
    s.value = std::max(s.value, std::abs(iface.value(j)));
    s.deriv1 = std::max(s.deriv1, std::abs(d1[j]));
    s.deriv2 = std::max(s.deriv2, std::abs(d2[j]));
  }
  return s;
}

struct Separation {
  double value = 0.0;
  double alpha = 0.0;
  std::size_t index = 0;
};

/// Minimum vertical gap min_j (f_j - g_j) and the node attaining it, ties
/// broken toward the smallest alpha.
///
/// For truncated real-line data the minimum is searched in a compact window
/// [-W, W] (default W = A/2); the far field must not be the minimizer for
/// the separation to be meaningful, which holds whenever the gap is well
/// below f_inf - g_inf. Pass `window_half_width` <= 0 for the default.
inline Separation min_separation(const GraphInterface& f, const GraphInterface& g,
                                 double window_half_width = 0.0) {
  if (!f.same_grid(g)) throw GridMismatchError("min_separation: grid mismatch");
  double window = window_half_width;
  if (window <= 0.0)
    window = (f.domain() == DomainKind::real_line) ? 0.5 * f.half_width()
                                                   : std::numeric_limits<double>::infinity();
  Separation best;
  best.value = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double gap = f.value(j) - g.value(j);
    if (!(gap > 0.0))
      throw SplashError("min_separation: phases touch at alpha = " + std::to_string(f.node(j)));
    if (std::abs(f.node(j)) > window) continue;
    if (gap < best.value) {
      best.value = gap;
      best.alpha = f.node(j);
      best.index = j;
      found = true;
    }
  }
  if (!found) throw ConfigError("min_separation: search window contains no grid nodes");
  return best;
}

/// Discrete chord-arc constant: min over node pairs of |x(a)-x(a-b)| / |b|
/// with |b| the shortest periodic parameter distance. Pairs with |b| inside
/// the excluded interval are skipped, and the outer minimum can be
/// restricted to an alpha window (both endpoints inclusive).
inline double chord_arc_constant(const ClosedContour& x, double excluded_beta,
                                 std::optional<std::pair<double, double>> alpha_window = std::nullopt) {
  const std::size_t n = x.size();
  const double h = x.grid_step();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x.node(i);
    if (alpha_window && (a < alpha_window->first || a > alpha_window->second)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double beta = h * (static_cast<double>(i) - static_cast<double>(j));
      beta -= 2.0 * kPi * std::floor((beta + kPi) / (2.0 * kPi));  // wrap to [-pi, pi)
      const double dist = std::abs(beta);
      if (dist <= excluded_beta) continue;
      best = std::min(best, (x.point(i) - x.point(j)).norm() / dist);
    }
  }
  if (!std::isfinite(best)) throw ConfigError("chord_arc_constant: no admissible node pairs");
  if (!(best > 0.0)) throw SplashError("chord_arc_constant: self-intersection (ratio <= 0)");
  return best;
}

/// Per-node curvature |x' ^ x''| / |x'|^3 from discrete derivatives.
inline std::vector<double> curvature(const ClosedContour& x) {
  const double h = x.grid_step();
  const auto d1x1 = derivative_samples(x.x1(), h, true, 1);
  const auto d1x2 = derivative_samples(x.x2(), h, true, 1);
  const auto d2x1 = derivative_samples(x.x1(), h, true, 2);
  const auto d2x2 = derivative_samples(x.x2(), h, true, 2);
  std::vector<double> kappa(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Vec2 t{d1x1[j], d1x2[j]};
    const Vec2 s{d2x1[j], d2x2[j]};
    const double speed = t.norm();
    if (speed < 1e-12)
      throw NumericalError("curvature: vanishing discrete tangent at node " + std::to_string(j));
    kappa[j] = std::abs(wedge(t, s)) / (speed * speed * speed);
  }
  return kappa;
}

/// Graph curvature |f''| / (1 + f'^2)^(3/2), the curve curvature of
/// (alpha, f(alpha)); reported as a blow-up diagnostic alongside S.
inline double max_graph_curvature(const GraphInterface& f) {
  const bool periodic = f.domain() == DomainKind::periodic;
  const auto d1 = derivative_samples(f.values(), f.grid_step(), periodic, 1);
  const auto d2 = derivative_samples(f.values(), f.grid_step(), periodic, 2);
  double best = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double den = std::pow(1.0 + d1[j] * d1[j], 1.5);
    best = std::max(best, std::abs(d2[j]) / den);
  }
  return best;
}

/// Monitored quantities recorded along a run.
struct Diagnostics {
  double separation = 0.0;
  double alpha_min = 0.0;
  double sup_f = 0.0;
  double sup_g = 0.0;
  double sup_f2 = 0.0;
  double sup_g2 = 0.0;
  double curvature_max = 0.0;
  double chord_arc = std::numeric_limits<double>::quiet_NaN();
  double monitor_C = 0.0;
};

}  // namespace splashcert
