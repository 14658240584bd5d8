#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "splashcert/errors.hpp"
#include "splashcert/geometry.hpp"
#include "splashcert/interpolation.hpp"
#include "splashcert/kernels.hpp"
#include "splashcert/quadrature.hpp"
#include "splashcert/vec2.hpp"

namespace splashcert {

struct QuadratureSpec {
  std::size_t n_nodes = 0;
  double half_width = 0.0;  // truncation L; unused for periodic rules
};

struct PairVelocity {
  std::vector<double> f_t;
  std::vector<double> g_t;
};

/// Multi-phase Muskat velocities on truncated real-line graphs:
///
///   f_t = int (z21 K(f,f) + z32 K(f,g)) dbeta,
///   g_t = int (z32 K(g,g) + z21 K(g,f)) dbeta.
inline PairVelocity muskat_velocity(const PhasePair& pair, const QuadratureSpec& quad) {
  pair.validate(DensityOrdering::stable_required);
  const InterfaceSampler sf(pair.f);
  const InterfaceSampler sg(pair.g);
  const double z21 = pair.zeta21();
  const double z32 = pair.zeta32();
  const std::size_t n = pair.f.size();
  PairVelocity v{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double a = pair.f.node(j);
    const double fa = pair.f.value(j);
    const double fpa = sf.deriv_samples()[j];
    const double ga = pair.g.value(j);
    const double gpa = sg.deriv_samples()[j];
    v.f_t[j] = integrate_realline(
        [&](double b) {
          return z21 * detail::muskat_kernel_hoisted(sf, sf, a, fa, fpa, b) +
                 z32 * detail::muskat_kernel_hoisted(sf, sg, a, fa, fpa, b);
        },
        quad.half_width, quad.n_nodes);
    v.g_t[j] = integrate_realline(
        [&](double b) {
          return z32 * detail::muskat_kernel_hoisted(sg, sg, a, ga, gpa, b) +
                 z21 * detail::muskat_kernel_hoisted(sg, sf, a, ga, gpa, b);
        },
        quad.half_width, quad.n_nodes);
  }
  return v;
}

/// Multi-phase SQG velocities on periodic graphs, same structure with the
/// Sigma kernel and no density ordering requirement.
inline PairVelocity sqg_multiphase_velocity(const PhasePair& pair, std::size_t n_quad) {
  pair.validate(DensityOrdering::unordered);
  const InterfaceSampler sf(pair.f);
  const InterfaceSampler sg(pair.g);
  const double z21 = pair.zeta21();
  const double z32 = pair.zeta32();
  const std::size_t n = pair.f.size();
  PairVelocity v{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double a = pair.f.node(j);
    const double fa = pair.f.value(j);
    const double fpa = sf.deriv_samples()[j];
    const double ga = pair.g.value(j);
    const double gpa = sg.deriv_samples()[j];
    v.f_t[j] = pv_integrate_periodic(
        [&](double b) {
          return z21 * detail::sigma_kernel_hoisted(sf, a, fa, fpa, b) +
                 z32 * detail::sigma_kernel_hoisted(sg, a, fa, fpa, b);
        },
        n_quad);
    v.g_t[j] = pv_integrate_periodic(
        [&](double b) {
          return z32 * detail::sigma_kernel_hoisted(sg, a, ga, gpa, b) +
                 z21 * detail::sigma_kernel_hoisted(sf, a, ga, gpa, b);
        },
        n_quad);
  }
  return v;
}

/// Sharp-front SQG contour velocity x_t = pv int x'(a)-x'(a-b) / |x(a)-x(a-b)| db
/// (density jump normalized to 2*pi).
inline std::vector<Vec2> sqg_contour_velocity(const ClosedContour& x, std::size_t n_quad) {
  const ContourSampler s(x);
  const std::size_t n = x.size();
  std::vector<Vec2> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = x.node(j);
    const Vec2 pa = x.point(j);
    const Vec2 ta = s.tangent_at(a);
    v[j] = pv_integrate_periodic(
        [&](double b) { return detail::sqg_contour_integrand_hoisted(s, pa, ta, a, b); }, n_quad);
  }
  return v;
}

/// One-shot Muskat velocity of a closed contour (no time stepping is
/// offered for closed Muskat contours).
inline std::vector<Vec2> muskat_contour_velocity(const ClosedContour& x, double zeta21,
                                                 std::size_t n_quad) {
  const ContourSampler s(x);
  const std::size_t n = x.size();
  std::vector<Vec2> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = x.node(j);
    const Vec2 pa = x.point(j);
    const Vec2 ta = s.tangent_at(a);
    v[j] = pv_integrate_periodic(
              [&](double b) { return detail::muskat_contour_integrand_hoisted(s, pa, ta, a, b); },
              n_quad) *
           zeta21;
  }
  return v;
}

/// Single-interface Muskat velocity assembled through the curve form on the
/// graph x(alpha) = (alpha, f(alpha)). Algebraically identical to
/// zeta21 * int K(f,f) dbeta; kept as an independent evaluation route. The
/// same removable-limit guard applies on the near-diagonal.
inline std::vector<double> muskat_graph_velocity_curve_form(const GraphInterface& f, double zeta21,
                                                            const QuadratureSpec& quad) {
  const InterfaceSampler sf(f);
  const GraphCurveSampler curve(sf);
  const double guard = 0.5 * f.grid_step();
  const std::size_t n = f.size();
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = f.node(j);
    const Vec2 pa{a, f.value(j)};
    const Vec2 ta{1.0, sf.deriv_samples()[j]};
    v[j] = zeta21 * integrate_realline(
                        [&](double b) {
                          if (std::abs(b) < guard) return muskat_removable_limit(sf, a);
                          return detail::muskat_contour_integrand_hoisted(curve, pa, ta, a, b).x2;
                        },
                        quad.half_width, quad.n_nodes);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Two-branch chart decomposition near a monitored ball
// ---------------------------------------------------------------------------

/// Ball B of radius eps0/2 in which a pointwise approach of two contour
/// branches is monitored.
struct MonitorBall {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;  // eps0 / 2
  double eps0() const { return 2.0 * radius; }
};

/// One branch of the contour written as a graph x2 = F(u) over the chart
/// coordinate u = x1 - center.x1 inside a strip around the ball. Built from
/// a run of consecutive contour nodes with strictly monotone x1; values are
/// recovered by inverting the interpolated x1 along the run.
class ChartBranch {
 public:
  ChartBranch(const ContourSampler& sampler, std::vector<double> params, Vec2 center)
      : sampler_(&sampler), params_(std::move(params)), center_(center) {
    u_.reserve(params_.size());
    for (double p : params_) u_.push_back(sampler_->point_at(p).x1 - center_.x1);
    increasing_ = u_.back() > u_.front();
    for (std::size_t i = 1; i < u_.size(); ++i) {
      const bool up = u_[i] > u_[i - 1];
      if (up != increasing_)
        throw ChartError("chart branch: x1 is not monotone along the contour run");
    }
  }

  double u_min() const { return increasing_ ? u_.front() : u_.back(); }
  double u_max() const { return increasing_ ? u_.back() : u_.front(); }
  double mean_height() const {
    double s = 0.0;
    for (double p : params_) s += sampler_->point_at(p).x2;
    return s / static_cast<double>(params_.size()) - center_.x2;
  }

  /// Chart value F(u) (height relative to the ball center) and slope F'(u).
  void eval(double u, double& value, double& slope) const {
    const double p = invert(u);
    const Vec2 pt = sampler_->point_at(p);
    const Vec2 tg = sampler_->tangent_at(p);
    if (std::abs(tg.x1) < 1e-12)
      throw ChartError("chart branch: vertical tangent inside the chart strip");
    value = pt.x2 - center_.x2;
    slope = tg.x2 / tg.x1;
  }

  double value(double u) const {
    double v, s;
    eval(u, v, s);
    return v;
  }

 private:
  double invert(double u) const {
    if (u < u_min() || u > u_max())
      throw ChartError("chart branch: query outside the covered strip");
    const double target = u + center_.x1;
    // bracket by stored nodes, then bisect the interpolated x1
    std::size_t lo_i = 0, hi_i = params_.size() - 1;
    while (hi_i - lo_i > 1) {
      const std::size_t mid = (lo_i + hi_i) / 2;
      const bool below = increasing_ ? (u_[mid] <= u) : (u_[mid] >= u);
      (below ? lo_i : hi_i) = mid;
    }
    double lo = params_[lo_i], hi = params_[hi_i];
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double x1m = sampler_->point_at(mid).x1;
      const bool below = increasing_ ? (x1m <= target) : (x1m >= target);
      (below ? lo : hi) = mid;
      if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
  }

  const ContourSampler* sampler_;
  std::vector<double> params_;
  std::vector<double> u_;
  Vec2 center_;
  bool increasing_ = false;
};

/// Both chart branches (upper F, lower G) around a monitored ball, plus the
/// contour nodes falling inside the ball itself.
struct ChartDecomposition {
  ChartBranch upper;
  ChartBranch lower;
  std::vector<std::size_t> upper_ball_nodes;
  std::vector<std::size_t> lower_ball_nodes;
};

namespace detail {

/// Finds the two contour runs crossing the strip |x1 - cx| <= strip_half and
/// turns them into chart branches. Node parameters are unwrapped so each run
/// is a contiguous increasing parameter list.
inline ChartDecomposition extract_charts(const ClosedContour& x, const ContourSampler& sampler,
                                         const MonitorBall& ball, double strip_half) {
  const std::size_t n = x.size();
  std::vector<bool> in_strip(n);
  for (std::size_t j = 0; j < n; ++j)
    in_strip[j] = std::abs(x.point(j).x1 - ball.center.x1) <= strip_half;

  // maximal cyclic runs of consecutive in-strip nodes
  std::vector<std::vector<std::size_t>> runs;
  std::size_t start = 0;
  while (start < n && in_strip[start]) ++start;
  if (start == n) throw ChartError("chart extraction: the whole contour lies in the strip");
  for (std::size_t off = 0; off < n; ++off) {
    const std::size_t j = (start + off) % n;
    if (!in_strip[j]) continue;
    if (runs.empty() || ((runs.back().back() + 1) % n) != j) runs.emplace_back();
    runs.back().push_back(j);
  }
  if (runs.size() != 2)
    throw ChartError("chart extraction: expected two branch runs in the strip, found " +
                     std::to_string(runs.size()));

  auto make_branch = [&](const std::vector<std::size_t>& run) {
    std::vector<double> params;
    params.reserve(run.size());
    const double h = x.grid_step();
    double prev = x.node(run.front());
    params.push_back(prev);
    for (std::size_t i = 1; i < run.size(); ++i) {
      prev += h;  // consecutive nodes, unwrapped
      params.push_back(prev);
    }
    return ChartBranch(sampler, std::move(params), ball.center);
  };

  ChartBranch b0 = make_branch(runs[0]);
  ChartBranch b1 = make_branch(runs[1]);
  const bool first_upper = b0.mean_height() > b1.mean_height();
  const auto& upper_run = first_upper ? runs[0] : runs[1];
  const auto& lower_run = first_upper ? runs[1] : runs[0];

  ChartDecomposition out{first_upper ? std::move(b0) : std::move(b1),
                         first_upper ? std::move(b1) : std::move(b0),
                         {},
                         {}};
  for (std::size_t j : upper_run)
    if ((x.point(j) - ball.center).norm() <= ball.radius) out.upper_ball_nodes.push_back(j);
  for (std::size_t j : lower_run)
    if ((x.point(j) - ball.center).norm() <= ball.radius) out.lower_ball_nodes.push_back(j);
  return out;
}

template <class Pred>
inline double chord_arc_constant_if(const ClosedContour& x, double excluded_beta, Pred&& keep) {
  const std::size_t n = x.size();
  const double h = x.grid_step();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep(i)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double beta = h * (static_cast<double>(i) - static_cast<double>(j));
      beta -= 2.0 * kPi * std::floor((beta + kPi) / (2.0 * kPi));
      if (std::abs(beta) <= excluded_beta) continue;
      best = std::min(best, (x.point(i) - x.point(j)).norm() / std::abs(beta));
    }
  }
  if (!std::isfinite(best))
    throw ChartError("chord_arc_constant: no admissible node pairs in the window");
  if (!(best > 0.0)) throw SplashError("chord_arc_constant: self-intersection (ratio <= 0)");
  return best;
}

}  // namespace detail

struct BranchVelocitySample {
  std::size_t node = 0;    // contour node index of the evaluation point
  double chart_u = 0.0;    // chart coordinate of that node
  double velocity = 0.0;   // chart velocity = self + cross + remainder
  double remainder = 0.0;  // full contour value minus the two chart integrals
};

struct BranchVelocity {
  std::vector<BranchVelocitySample> upper;  // F branch
  std::vector<BranchVelocitySample> lower;  // G branch
  double eps0 = 0.0;
  double chord_arc = 0.0;          // measured inside the ball window, |beta| > eps0
  double sup_second_deriv = 0.0;   // max |x''| over the contour
  double remainder_bound = 0.0;    // (sup |x''| / c_CA) * (2*pi - 2*eps0)
  double max_abs_remainder = 0.0;
  bool remainder_within_bound = false;
};

/// Decomposes the sharp-front velocity near a monitored ball into the two
/// chart integrals plus a remainder.
///
/// For a chart evaluation point u on the upper branch,
///
///   self(u)  =  int_{-eps0}^{eps0} (F'(u) - F'(u-b)) / sqrt(b^2 + (F(u)-F(u-b))^2) db,
///   cross(u) = -int_{-eps0}^{eps0} (F'(u) - G'(u-b)) / sqrt(b^2 + (F(u)-G(u-b))^2) db,
///
/// with the sign of the cross integral carrying the opposite traversal
/// direction of the other branch. The remainder R = full - self - cross is
/// reported per sample together with the bound
/// (sup|x''| / c_CA) * (2*pi - 2*eps0), where c_CA is measured from the ball
/// window with |beta| <= eps0 excluded.
inline BranchVelocity sqg_branch_velocity(const ClosedContour& x, const MonitorBall& ball,
                                          std::size_t n_quad) {
  if (!(ball.radius > 0.0)) throw ConfigError("sqg_branch_velocity: ball radius must be positive");
  const double eps0 = ball.eps0();
  const ContourSampler sampler(x);
  const auto charts = detail::extract_charts(x, sampler, ball, 1.5 * eps0 + 2.0 * x.grid_step());

  if (charts.upper_ball_nodes.empty() && charts.lower_ball_nodes.empty())
    throw ChartError("sqg_branch_velocity: no contour nodes inside the monitored ball");

  const auto full = sqg_contour_velocity(x, n_quad);

  BranchVelocity out;
  out.eps0 = eps0;
  {
    std::vector<bool> in_ball(x.size(), false);
    for (std::size_t j : charts.upper_ball_nodes) in_ball[j] = true;
    for (std::size_t j : charts.lower_ball_nodes) in_ball[j] = true;
    out.chord_arc =
        detail::chord_arc_constant_if(x, eps0, [&](std::size_t i) { return in_ball[i]; });
  }
  {
    const auto d2x1 = derivative_samples(x.x1(), x.grid_step(), true, 2);
    const auto d2x2 = derivative_samples(x.x2(), x.grid_step(), true, 2);
    for (std::size_t j = 0; j < x.size(); ++j)
      out.sup_second_deriv = std::max(out.sup_second_deriv, std::hypot(d2x1[j], d2x2[j]));
  }
  out.remainder_bound = out.sup_second_deriv / out.chord_arc * (2.0 * kPi - 2.0 * eps0);

  auto chart_integrals = [&](const ChartBranch& self, const ChartBranch& other, double u) {
    double fu, fpu;
    self.eval(u, fu, fpu);
    auto one = [&](const ChartBranch& source, double sign) {
      const double integral = detail::midpoint_symmetric(
          [&](double beta) {
            double sv, ss;
            source.eval(u - beta, sv, ss);
            return (fpu - ss) / std::sqrt(beta * beta + (fu - sv) * (fu - sv));
          },
          eps0, n_quad);
      return sign * integral;
    };
    return one(self, 1.0) + one(other, -1.0);
  };

  auto process = [&](const std::vector<std::size_t>& nodes, const ChartBranch& self,
                     const ChartBranch& other, std::vector<BranchVelocitySample>& dst) {
    for (std::size_t j : nodes) {
      BranchVelocitySample s;
      s.node = j;
      s.chart_u = x.point(j).x1 - ball.center.x1;
      const double parts = chart_integrals(self, other, s.chart_u);
      s.remainder = full[j].x2 - parts;
      s.velocity = parts + s.remainder;
      out.max_abs_remainder = std::max(out.max_abs_remainder, std::abs(s.remainder));
      dst.push_back(s);
    }
  };
  process(charts.upper_ball_nodes, charts.upper, charts.lower, out.upper);
  process(charts.lower_ball_nodes, charts.lower, charts.upper, out.lower);
  out.remainder_within_bound = out.max_abs_remainder <= out.remainder_bound;
  return out;
}

// ---------------------------------------------------------------------------
// Time stepping
// ---------------------------------------------------------------------------

/// Classical four-stage Runge-Kutta step on a flat state vector.
/// `on_stage1` sees the first stage derivative before any update and may
/// throw (CFL rejection hooks in the run loop).
template <class Rhs, class Hook>
inline void rk4_step(std::vector<double>& y, Rhs&& rhs, double dt, Hook&& on_stage1) {
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  rhs(y, k1);
  on_stage1(k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  rhs(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  rhs(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  rhs(tmp, k4);
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) y[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

template <class Rhs>
inline void rk4_step(std::vector<double>& y, Rhs&& rhs, double dt) {
  rk4_step(y, std::forward<Rhs>(rhs), dt, [](const std::vector<double>&) {});
}

/// Zeroes Fourier modes whose amplitude falls below `rel_threshold` times
/// the largest modal amplitude. Plain O(N^2) real DFT with a shared
/// cosine table; adequate at the grid sizes this tool runs at.
inline void spectral_filter(std::vector<double>& v, double rel_threshold = 1e-10) {
  const std::size_t n = v.size();
  if (n < 4) return;
  const std::size_t m = n / 2;
  std::vector<double> table(n);
  for (std::size_t i = 0; i < n; ++i)
    table[i] = std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  auto cos_at = [&](std::size_t k, std::size_t j) { return table[(k * j) % n]; };
  auto sin_at = [&](std::size_t k, std::size_t j) {
    return table[(k * j + 3 * (n / 4)) % n];  // sin(x) = cos(x - pi/2); valid for n % 4 == 0
  };
  const bool fast_sin = (n % 4 == 0);

  std::vector<double> a(m + 1, 0.0), b(m + 1, 0.0);
  for (std::size_t k = 0; k <= m; ++k) {
    double ak = 0.0, bk = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = cos_at(k, j);
      const double s = fast_sin ? sin_at(k, j)
                                : std::sin(2.0 * kPi * static_cast<double>(k * j % n) /
                                           static_cast<double>(n));
      ak += v[j] * c;
      bk += v[j] * s;
    }
    a[k] = ak;
    b[k] = bk;
  }
  double max_amp = 0.0;
  for (std::size_t k = 0; k <= m; ++k) max_amp = std::max(max_amp, std::hypot(a[k], b[k]));
  if (max_amp == 0.0) return;
  const double cutoff = rel_threshold * max_amp;
  std::vector<bool> keep(m + 1);
  bool changed = false;
  for (std::size_t k = 0; k <= m; ++k) {
    keep[k] = std::hypot(a[k], b[k]) >= cutoff;
    changed = changed || !keep[k];
  }
  if (!changed) return;  // leave samples bit-identical when nothing is filtered

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = keep[0] ? a[0] : 0.0;
    for (std::size_t k = 1; k < m; ++k) {
      if (!keep[k]) continue;
      const double c = cos_at(k, j);
      const double s = fast_sin ? sin_at(k, j)
                                : std::sin(2.0 * kPi * static_cast<double>(k * j % n) /
                                           static_cast<double>(n));
      acc += 2.0 * (a[k] * c + b[k] * s);
    }
    if (keep[m]) {
      if (n % 2 == 0)
        acc += a[m] * cos_at(m, j);
      else
        acc += 2.0 * (a[m] * cos_at(m, j) +
                      b[m] * (fast_sin ? sin_at(m, j)
                                       : std::sin(2.0 * kPi * static_cast<double>(m * j % n) /
                                                  static_cast<double>(n))));
    }
    v[j] = acc * inv_n;
  }
}

}  // namespace splashcert
