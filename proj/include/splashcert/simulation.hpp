#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splashcert/config.hpp"
#include "splashcert/errors.hpp"
#include "splashcert/evolution.hpp"
#include "splashcert/geometry.hpp"
#include "splashcert/scenario.hpp"
#include "splashcert/splash_monitor.hpp"

namespace splashcert {

/// State snapshot captured at a recorded step.
struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  std::variant<PhasePair, ClosedContour> geometry;
};

struct RunResult {
  TimeSeries series;
  std::vector<Snapshot> snapshots;
  double tail_error_scale = 0.0;  // O(1/L) truncation scale of the real-line quadrature
  double sep_scale = 1.0;         // min{f_inf - g_inf, 1}; 1 for periodic/contour data
};

namespace detail {

// Exclusion used for contour diagnostics when no ball is configured: the
// chord-arc scan skips parameter offsets below this and the separation proxy
// is the closest approach between parameter-distant nodes.
inline constexpr double kDefaultBetaExclusion = 0.1;
inline constexpr double kDistantBeta = 0.5 * kPi;

struct PairState {
  SimConfig cfg;
  PhasePair pair;

  std::vector<double> flatten() const {
    std::vector<double> y;
    y.reserve(2 * pair.f.size());
    y.insert(y.end(), pair.f.values().begin(), pair.f.values().end());
    y.insert(y.end(), pair.g.values().begin(), pair.g.values().end());
    return y;
  }

  PhasePair rebuild(const std::vector<double>& y) const {
    const std::size_t n = pair.f.size();
    std::vector<double> fv(y.begin(), y.begin() + n);
    std::vector<double> gv(y.begin() + n, y.end());
    const bool periodic = pair.f.domain() == DomainKind::periodic;
    GraphInterface f = periodic
                           ? GraphInterface::periodic(std::move(fv))
                           : GraphInterface::real_line(std::move(fv), pair.f.half_width(),
                                                       pair.f.far_field());
    GraphInterface g = periodic
                           ? GraphInterface::periodic(std::move(gv))
                           : GraphInterface::real_line(std::move(gv), pair.g.half_width(),
                                                       pair.g.far_field());
    return PhasePair{std::move(f), std::move(g), pair.zeta1, pair.zeta2, pair.zeta3};
  }
};

inline Diagnostics pair_diagnostics(const SimConfig& cfg, const PhasePair& pair) {
  Diagnostics d;
  const auto sep = min_separation(pair.f, pair.g, cfg.window_effective());
  d.separation = sep.value;
  d.alpha_min = sep.alpha;
  const auto nf = sup_norms(pair.f);
  const auto ng = sup_norms(pair.g);
  d.sup_f = nf.value;
  d.sup_g = ng.value;
  d.sup_f2 = nf.deriv2;
  d.sup_g2 = ng.deriv2;
  d.curvature_max = std::max(max_graph_curvature(pair.f), max_graph_curvature(pair.g));
  d.monitor_C = monitor_constant_graph(nf, ng, pair.zeta21(), pair.zeta32(), cfg.monitor_c0);
  return d;
}

inline Diagnostics contour_diagnostics(const SimConfig& cfg, const ClosedContour& x,
                                       const std::optional<MonitorBall>& ball) {
  Diagnostics d;
  const auto kappa = curvature(x);
  d.curvature_max = *std::max_element(kappa.begin(), kappa.end());
  double sup_x2 = 0.0;
  {
    const auto d2x1 = derivative_samples(x.x1(), x.grid_step(), true, 2);
    const auto d2x2 = derivative_samples(x.x2(), x.grid_step(), true, 2);
    for (std::size_t j = 0; j < x.size(); ++j)
      sup_x2 = std::max(sup_x2, std::hypot(d2x1[j], d2x2[j]));
  }
  if (ball) {
    const double eps0 = ball->eps0();
    const ContourSampler sampler(x);
    const auto charts = extract_charts(x, sampler, *ball, 1.5 * eps0 + 2.0 * x.grid_step());
    // separation over the chart window [-eps0, eps0]
    const std::size_t m = 257;
    double best = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    double sup_f2 = 0.0, sup_g2 = 0.0;
    const double du = 2.0 * eps0 / static_cast<double>(m - 1);
    std::vector<double> fu(m), gu(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double u = -eps0 + du * static_cast<double>(i);
      fu[i] = charts.upper.value(u);
      gu[i] = charts.lower.value(u);
      const double gap = fu[i] - gu[i];
      if (!(gap > 0.0)) throw SplashError("contour branches touch inside the monitored ball");
      if (gap < best) {
        best = gap;
        best_u = u;
      }
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
      sup_f2 = std::max(sup_f2, std::abs(fu[i + 1] - 2.0 * fu[i] + fu[i - 1]) / (du * du));
      sup_g2 = std::max(sup_g2, std::abs(gu[i + 1] - 2.0 * gu[i] + gu[i - 1]) / (du * du));
    }
    d.separation = best;
    d.alpha_min = best_u;
    d.sup_f2 = sup_f2;
    d.sup_g2 = sup_g2;
    std::vector<bool> in_ball(x.size(), false);
    for (std::size_t j : charts.upper_ball_nodes) in_ball[j] = true;
    for (std::size_t j : charts.lower_ball_nodes) in_ball[j] = true;
    d.chord_arc = chord_arc_constant_if(x, eps0, [&](std::size_t i) { return in_ball[i]; });
    d.monitor_C = monitor_constant_contour(sup_x2, d.chord_arc, eps0, cfg.monitor_c0);
  } else {
    // no monitored ball: closest approach between parameter-distant nodes
    double best = std::numeric_limits<double>::infinity();
    double best_alpha = 0.0;
    const std::size_t n = x.size();
    const double h = x.grid_step();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double beta = h * static_cast<double>(j - i);
        beta -= 2.0 * kPi * std::floor((beta + kPi) / (2.0 * kPi));
        if (std::abs(beta) < kDistantBeta) continue;
        const double dist = (x.point(i) - x.point(j)).norm();
        if (dist < best) {
          best = dist;
          best_alpha = x.node(i);
        }
      }
    }
    d.separation = best;
    d.alpha_min = best_alpha;
    d.sup_f2 = std::numeric_limits<double>::quiet_NaN();
    d.sup_g2 = std::numeric_limits<double>::quiet_NaN();
    d.chord_arc = chord_arc_constant(x, kDefaultBetaExclusion);
    d.monitor_C = monitor_constant_contour(sup_x2, d.chord_arc, kDefaultBetaExclusion, cfg.monitor_c0);
  }
  return d;
}

inline DiagnosticsRecord to_record(double t, const Diagnostics& d) {
  DiagnosticsRecord r;
  r.t = t;
  r.separation = d.separation;
  r.alpha_min = d.alpha_min;
  r.sup_f2 = d.sup_f2;
  r.sup_g2 = d.sup_g2;
  r.curvature_max = d.curvature_max;
  r.chord_arc = d.chord_arc;
  r.monitor_C = d.monitor_C;
  return r;
}

/// Fills the envelope column from the recorded monitor constants (prefix
/// trapezoid), or NaN when the initial separation is outside (0, 1).
inline void fill_envelope_column(TimeSeries& series) {
  if (series.records.empty()) return;
  const double s0 = series.records.front().separation;
  if (!(s0 > 0.0 && s0 < 1.0)) return;  // records keep their NaN envelope
  std::vector<double> times, rates;
  times.reserve(series.records.size());
  rates.reserve(series.records.size());
  for (const auto& r : series.records) {
    times.push_back(r.t);
    rates.push_back(r.monitor_C);
  }
  const auto env = envelope_series(s0, times, rates);
  for (std::size_t i = 0; i < env.size(); ++i) series.records[i].envelope = env[i];
}

}  // namespace detail

/// Runs the configured scenario to t_end with classical RK4 at fixed dt,
/// recording diagnostics every record_every steps (step 0 and, when the
/// step count divides evenly, the final step included).
///
/// A detected splash or any evaluation error stops the run; what was
/// recorded so far is returned with the error written to the series status.
/// Runs are deterministic: identical configurations reproduce identical
/// results bit for bit on the same build.
inline RunResult run_simulation(const SimConfig& cfg) {
  InitialState init = make_scenario(cfg);
  RunResult out;
  const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const bool filtered = cfg.filter_effective();

  if (init.is_pair()) {
    out.tail_error_scale = cfg.system == SystemKind::muskat_multiphase
                               ? 1.0 / cfg.quad_l_effective()
                               : 0.0;
    if (cfg.system == SystemKind::muskat_multiphase) {
      const auto& pr = init.pair();
      out.sep_scale = std::min(pr.f.far_field() - pr.g.far_field(), 1.0);
    }
  }

  const QuadratureSpec quad{cfg.quad_n_effective(), cfg.quad_l_effective()};
  const bool muskat = cfg.system == SystemKind::muskat_multiphase;

  try {
    if (init.is_pair()) {
      detail::PairState st{cfg, std::move(std::get<PhasePair>(init.geometry))};
      const double h = st.pair.f.grid_step();
      auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        const PhasePair p = st.rebuild(y);
        const PairVelocity v = muskat ? muskat_velocity(p, quad)
                                      : sqg_multiphase_velocity(p, quad.n_nodes);
        std::copy(v.f_t.begin(), v.f_t.end(), dy.begin());
        std::copy(v.g_t.begin(), v.g_t.end(), dy.begin() + static_cast<long>(v.f_t.size()));
      };
      auto cfl_check = [&](const std::vector<double>& k1) {
        double vmax = 0.0;
        for (double v : k1) vmax = std::max(vmax, std::abs(v));
        if (vmax > 0.0 && cfg.dt > cfg.cfl * h / vmax)
          throw StepRejectedError("step rejected: dt = " + std::to_string(cfg.dt) +
                                  " exceeds the CFL bound " + std::to_string(cfg.cfl * h / vmax));
      };
      std::vector<double> y = st.flatten();
      for (std::size_t step = 0; step <= n_steps; ++step) {
        const double t = cfg.dt * static_cast<double>(step);
        if (step % cfg.record_every == 0) {
          const PhasePair p = st.rebuild(y);
          p.validate(muskat ? DensityOrdering::stable_required : DensityOrdering::unordered);
          out.series.records.push_back(detail::to_record(t, detail::pair_diagnostics(cfg, p)));
          out.snapshots.push_back(Snapshot{step, t, p});
        }
        if (step == n_steps) break;
        rk4_step(y, rhs, cfg.dt, cfl_check);
        if (filtered) {
          // graph-pair runs only filter on request
          const std::size_t n = y.size() / 2;
          std::vector<double> fv(y.begin(), y.begin() + static_cast<long>(n));
          std::vector<double> gv(y.begin() + static_cast<long>(n), y.end());
          spectral_filter(fv);
          spectral_filter(gv);
          std::copy(fv.begin(), fv.end(), y.begin());
          std::copy(gv.begin(), gv.end(), y.begin() + static_cast<long>(n));
        }
      }
    } else {
      ClosedContour x = std::move(std::get<ClosedContour>(init.geometry));
      const double h = x.grid_step();
      const std::size_t n = x.size();
      auto rebuild = [&](const std::vector<double>& y) {
        std::vector<double> x1(y.begin(), y.begin() + static_cast<long>(n));
        std::vector<double> x2(y.begin() + static_cast<long>(n), y.end());
        return ClosedContour::from_samples(std::move(x1), std::move(x2));
      };
      auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        const ClosedContour c = rebuild(y);
        const auto v = sqg_contour_velocity(c, quad.n_nodes);
        for (std::size_t j = 0; j < n; ++j) {
          dy[j] = v[j].x1;
          dy[n + j] = v[j].x2;
        }
      };
      auto cfl_check = [&](const std::vector<double>& k1) {
        double vmax = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          vmax = std::max(vmax, std::hypot(k1[j], k1[n + j]));
        if (vmax > 0.0 && cfg.dt > cfg.cfl * h / vmax)
          throw StepRejectedError("step rejected: dt = " + std::to_string(cfg.dt) +
                                  " exceeds the CFL bound " + std::to_string(cfg.cfl * h / vmax));
      };
      std::vector<double> y;
      y.reserve(2 * n);
      y.insert(y.end(), x.x1().begin(), x.x1().end());
      y.insert(y.end(), x.x2().begin(), x.x2().end());
      for (std::size_t step = 0; step <= n_steps; ++step) {
        const double t = cfg.dt * static_cast<double>(step);
        if (step % cfg.record_every == 0) {
          const ClosedContour c = rebuild(y);
          c.require_simple();
          out.series.records.push_back(
              detail::to_record(t, detail::contour_diagnostics(cfg, c, init.ball)));
          out.snapshots.push_back(Snapshot{step, t, c});
        }
        if (step == n_steps) break;
        rk4_step(y, rhs, cfg.dt, cfl_check);
        if (filtered) {
          std::vector<double> x1(y.begin(), y.begin() + static_cast<long>(n));
          std::vector<double> x2(y.begin() + static_cast<long>(n), y.end());
          spectral_filter(x1);
          spectral_filter(x2);
          std::copy(x1.begin(), x1.end(), y.begin());
          std::copy(x2.begin(), x2.end(), y.begin() + static_cast<long>(n));
        }
      }
    }
  } catch (const SplashError&) {
    out.series.status = "splash";
    detail::fill_envelope_column(out.series);
    return out;
  } catch (const Error& e) {
    out.series.status = std::string("error:") + error_code_name(e.code());
    detail::fill_envelope_column(out.series);
    return out;
  }
  out.series.status = "ok";
  detail::fill_envelope_column(out.series);
  return out;
}

/// Certification options consistent with a run's configuration.
inline CertifyOptions certify_options_for(const SimConfig& cfg, const RunResult& run) {
  CertifyOptions opt;
  opt.small_sep_frac = cfg.small_sep_frac;
  opt.sep_scale = run.sep_scale;
  opt.tol_env = cfg.tol_env;
  opt.tol_rate_frac = cfg.tol_rate_frac;
  return opt;
}

}  // namespace splashcert
