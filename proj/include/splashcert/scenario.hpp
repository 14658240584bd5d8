#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "splashcert/config.hpp"
#include "splashcert/errors.hpp"
#include "splashcert/evolution.hpp"
#include "splashcert/geometry.hpp"

namespace splashcert {

/// Initial data for a run: either a graph pair or a closed contour, plus the
/// monitored ball for near-pinch contours.
struct InitialState {
  std::variant<PhasePair, ClosedContour> geometry;
  std::optional<MonitorBall> ball;

  bool is_pair() const { return std::holds_alternative<PhasePair>(geometry); }
  const PhasePair& pair() const { return std::get<PhasePair>(geometry); }
  const ClosedContour& contour() const { return std::get<ClosedContour>(geometry); }
};

namespace detail {

class ParamReader {
 public:
  ParamReader(const std::string& scenario, const std::map<std::string, double>& params)
      : scenario_(scenario), params_(params) {}

  double get(const std::string& name, double fallback) {
    used_.insert(name);
    auto it = params_.find(name);
    return it == params_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [k, v] : params_)
      if (!used_.count(k))
        throw ConfigError("scenario '" + scenario_ + "': unknown parameter '" + k + "'");
  }

 private:
  std::string scenario_;
  const std::map<std::string, double>& params_;
  std::set<std::string> used_;
};

inline GraphInterface sample_graph(const SimConfig& c, const std::function<double(double)>& fn,
                                   double far_field) {
  std::vector<double> v(c.grid_n);
  const bool periodic = c.system == SystemKind::sqg_multiphase;
  const double half = periodic ? kPi : c.half_width;
  const double h = 2.0 * half / static_cast<double>(c.grid_n);
  for (std::size_t j = 0; j < c.grid_n; ++j) v[j] = fn(-half + h * static_cast<double>(j));
  return periodic ? GraphInterface::periodic(std::move(v))
                  : GraphInterface::real_line(std::move(v), half, far_field);
}

}  // namespace detail

/// Builds the named initial state on the configured grid.
///
/// Graph-pair scenarios (f above g):
///   flat_pair      f = a, g = b                                   (a=1, b=0)
///   bump_pair      f = d/2 + h1 exp(-x^2/w), g = -d/2 - h2 exp(-x^2/w)
///                  (d=1, h1=h2=-0.4, w=1; negative bump heights point the
///                  bumps toward each other, gap d + h1 + h2 at the origin)
///   tilted_stable  f, g = +-gap/2 + slope * x * exp(-x^2/w)
///                  (gap=1, slope=0.1, w=4; heavy fluid below)
///
/// Contour scenarios:
///   circle         radius R                                        (R=1)
///   ellipse        semi-axes a, b                                  (a=2, b=1)
///   pinch_contour  peanut x = (-sin s, cos s * (d/2 + H sin^2 s)): two
///                  near-horizontal branches at vertical distance d through
///                  a ball of radius eps0/2 at the origin
///                  (d=0.2, H=0.5, eps0=0.5)
inline InitialState make_scenario(const SimConfig& c) {
  detail::ParamReader p(c.scenario, c.scenario_params);
  const bool pair_system = c.system != SystemKind::sqg_contour;

  auto require_pair_system = [&] {
    if (!pair_system)
      throw ConfigError("scenario '" + c.scenario + "' needs a graph-pair system, not sqg_contour");
  };
  auto require_contour_system = [&] {
    if (pair_system)
      throw ConfigError("scenario '" + c.scenario + "' needs system sqg_contour");
  };

  InitialState state;
  if (c.scenario == "flat_pair") {
    require_pair_system();
    const double a = p.get("a", 1.0);
    const double b = p.get("b", 0.0);
    p.finish();
    if (!(a > b)) throw ConfigError("flat_pair: requires a > b");
    state.geometry = PhasePair{detail::sample_graph(c, [&](double) { return a; }, a),
                               detail::sample_graph(c, [&](double) { return b; }, b),
                               c.zeta1, c.zeta2, c.zeta3};
  } else if (c.scenario == "bump_pair") {
    require_pair_system();
    const double d = p.get("d", 1.0);
    const double h1 = p.get("h1", -0.4);
    const double h2 = p.get("h2", -0.4);
    const double w = p.get("w", 1.0);
    p.finish();
    if (!(w > 0.0)) throw ConfigError("bump_pair: width w must be positive");
    auto f = [&](double x) { return 0.5 * d + h1 * std::exp(-x * x / w); };
    auto g = [&](double x) { return -0.5 * d - h2 * std::exp(-x * x / w); };
    state.geometry = PhasePair{detail::sample_graph(c, f, 0.5 * d),
                               detail::sample_graph(c, g, -0.5 * d), c.zeta1, c.zeta2, c.zeta3};
  } else if (c.scenario == "tilted_stable") {
    require_pair_system();
    const double gap = p.get("gap", 1.0);
    const double slope = p.get("slope", 0.1);
    const double w = p.get("w", 4.0);
    p.finish();
    if (!(gap > 0.0)) throw ConfigError("tilted_stable: gap must be positive");
    auto tilt = [&](double x) { return slope * x * std::exp(-x * x / w); };
    state.geometry = PhasePair{detail::sample_graph(c, [&](double x) { return 0.5 * gap + tilt(x); }, 0.5 * gap),
                               detail::sample_graph(c, [&](double x) { return -0.5 * gap + tilt(x); }, -0.5 * gap),
                               c.zeta1, c.zeta2, c.zeta3};
  } else if (c.scenario == "circle" || c.scenario == "ellipse") {
    require_contour_system();
    double ax, bx;
    if (c.scenario == "circle") {
      ax = bx = p.get("R", 1.0);
    } else {
      ax = p.get("a", 2.0);
      bx = p.get("b", 1.0);
    }
    p.finish();
    if (!(ax > 0.0 && bx > 0.0)) throw ConfigError(c.scenario + ": axes must be positive");
    std::vector<double> x1(c.grid_n), x2(c.grid_n);
    const double h = 2.0 * kPi / static_cast<double>(c.grid_n);
    for (std::size_t j = 0; j < c.grid_n; ++j) {
      const double s = -kPi + h * static_cast<double>(j);
      x1[j] = ax * std::cos(s);
      x2[j] = bx * std::sin(s);
    }
    state.geometry = ClosedContour::from_samples(std::move(x1), std::move(x2));
  } else if (c.scenario == "pinch_contour") {
    require_contour_system();
    const double d = p.get("d", 0.2);
    const double lobe = p.get("H", 0.5);
    const double eps0 = p.get("eps0", 0.5);
    p.finish();
    if (!(d > 0.0)) throw ConfigError("pinch_contour: branch distance d must be positive");
    if (!(eps0 > d)) throw ConfigError("pinch_contour: eps0 must exceed d so the branches sit inside the ball");
    if (!(eps0 < 2.0 / 3.0))
      throw ConfigError("pinch_contour: eps0 must stay below 2/3 so the chart strip fits the neck");
    if (!(lobe > 0.25 * d)) throw ConfigError("pinch_contour: H must exceed d/4 for a strict neck minimum");
    std::vector<double> x1(c.grid_n), x2(c.grid_n);
    const double h = 2.0 * kPi / static_cast<double>(c.grid_n);
    for (std::size_t j = 0; j < c.grid_n; ++j) {
      const double s = -kPi + h * static_cast<double>(j);
      const double sin_s = std::sin(s);
      x1[j] = -sin_s;
      x2[j] = std::cos(s) * (0.5 * d + lobe * sin_s * sin_s);
    }
    state.geometry = ClosedContour::from_samples(std::move(x1), std::move(x2));
    state.ball = MonitorBall{{0.0, 0.0}, 0.5 * eps0};
  } else {
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  }

  if (state.is_pair()) {
    const auto& pr = state.pair();
    pr.validate(c.system == SystemKind::muskat_multiphase ? DensityOrdering::stable_required
                                                          : DensityOrdering::unordered);
    if (c.system == SystemKind::muskat_multiphase) {
      pr.f.require_far_field_decay(c.decay_tol);
      pr.g.require_far_field_decay(c.decay_tol);
      if (!(pr.f.far_field() > pr.g.far_field()))
        throw ConfigError("scenario '" + c.scenario + "': far fields must satisfy f_inf > g_inf");
    }
  } else {
    state.contour().require_simple();
  }
  return state;
}

}  // namespace splashcert
