#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "splashcert/finite_difference.hpp"
#include "splashcert/geometry.hpp"
#include "splashcert/vec2.hpp"

namespace splashcert {

namespace detail {

/// Lagrange cubic weights for nodes {0,1,2,3} evaluated at u.
inline std::array<double, 4> cubic_weights(double u) {
  const double u1 = u - 1.0, u2 = u - 2.0, u3 = u - 3.0;
  return {-u1 * u2 * u3 / 6.0, u * u2 * u3 / 2.0, -u * u1 * u3 / 2.0, u * u1 * u2 / 6.0};
}

struct Stencil {
  std::array<double, 4> w;
  std::array<std::size_t, 4> idx;
  bool clamped = false;  // real-line query outside the sampled window
};

}  // namespace detail

/// Evaluates a graph interface and its derivatives anywhere on its domain.
///
/// Off-grid values come from local cubic interpolation through the four
/// surrounding nodes; derivatives interpolate the fourth-order
/// finite-difference samples the same way. Periodic interfaces wrap;
/// real-line queries outside the sampled window clamp to the far field
/// (value f_inf, derivatives zero). Queries at a node reproduce the stored
/// sample exactly.
///
/// The *_diff_at variants return `ref - f(s)` with the subtraction pushed
/// inside the interpolation, so differences of nearby values keep full
/// precision and a common offset added to `ref` and to every sample cancels
/// exactly.
class InterfaceSampler {
 public:
  explicit InterfaceSampler(const GraphInterface& iface)
      : domain_(iface.domain()),
        n_(iface.size()),
        origin_(-iface.half_width()),
        step_(iface.grid_step()),
        inv_step_(1.0 / iface.grid_step()),
        far_(iface.far_field()),
        values_(iface.values()),
        d1_(derivative_samples(iface.values(), iface.grid_step(),
                               iface.domain() == DomainKind::periodic, 1)),
        d2_(derivative_samples(iface.values(), iface.grid_step(),
                               iface.domain() == DomainKind::periodic, 2)) {}

  double grid_step() const { return step_; }
  DomainKind domain() const { return domain_; }
  const std::vector<double>& deriv_samples() const { return d1_; }
  const std::vector<double>& second_deriv_samples() const { return d2_; }

  double value_at(double s) const { return eval(values_, s, far_); }
  double deriv_at(double s) const { return eval(d1_, s, 0.0); }
  double second_deriv_at(double s) const { return eval(d2_, s, 0.0); }

  double value_diff_at(double s, double ref) const { return eval_diff(values_, s, far_, ref); }
  double deriv_diff_at(double s, double ref) const { return eval_diff(d1_, s, 0.0, ref); }

  /// f(alpha) - f(alpha - beta) and the same difference of f', sharing one
  /// stencil lookup. `value_ref`/`deriv_ref` are the values at alpha.
  void deltas_at(double s, double value_ref, double deriv_ref, double& dv, double& dd) const {
    const auto st = locate(s);
    if (st.clamped) {
      dv = value_ref - far_;
      dd = deriv_ref;
      return;
    }
    dv = st.w[0] * (value_ref - values_[st.idx[0]]) + st.w[1] * (value_ref - values_[st.idx[1]]) +
         st.w[2] * (value_ref - values_[st.idx[2]]) + st.w[3] * (value_ref - values_[st.idx[3]]);
    dd = st.w[0] * (deriv_ref - d1_[st.idx[0]]) + st.w[1] * (deriv_ref - d1_[st.idx[1]]) +
         st.w[2] * (deriv_ref - d1_[st.idx[2]]) + st.w[3] * (deriv_ref - d1_[st.idx[3]]);
  }

 private:
  detail::Stencil locate(double s) const {
    detail::Stencil st;
    double t = (s - origin_) * inv_step_;
    if (domain_ == DomainKind::periodic) {
      const double dn = static_cast<double>(n_);
      t -= dn * std::floor(t / dn);
      long base = static_cast<long>(std::floor(t)) - 1;
      st.w = detail::cubic_weights(t - static_cast<double>(base));
      for (int i = 0; i < 4; ++i) {
        long k = (base + i) % static_cast<long>(n_);
        if (k < 0) k += static_cast<long>(n_);
        st.idx[i] = static_cast<std::size_t>(k);
      }
    } else {
      if (t < 0.0 || t > static_cast<double>(n_ - 1)) {
        st.clamped = true;
        return st;
      }
      long base = static_cast<long>(std::floor(t)) - 1;
      base = std::max(0L, std::min(base, static_cast<long>(n_) - 4));
      st.w = detail::cubic_weights(t - static_cast<double>(base));
      for (int i = 0; i < 4; ++i) st.idx[i] = static_cast<std::size_t>(base + i);
    }
    return st;
  }

  double eval(const std::vector<double>& data, double s, double clamp_value) const {
    const auto st = locate(s);
    if (st.clamped) return clamp_value;
    return st.w[0] * data[st.idx[0]] + st.w[1] * data[st.idx[1]] + st.w[2] * data[st.idx[2]] +
           st.w[3] * data[st.idx[3]];
  }

  double eval_diff(const std::vector<double>& data, double s, double clamp_value,
                   double ref) const {
    const auto st = locate(s);
    if (st.clamped) return ref - clamp_value;
    return st.w[0] * (ref - data[st.idx[0]]) + st.w[1] * (ref - data[st.idx[1]]) +
           st.w[2] * (ref - data[st.idx[2]]) + st.w[3] * (ref - data[st.idx[3]]);
  }

  DomainKind domain_;
  std::size_t n_;
  double origin_, step_, inv_step_, far_;
  std::vector<double> values_, d1_, d2_;
};

/// Point/tangent evaluation along a sampled closed contour (periodic cubic
/// interpolation of positions and of the finite-difference tangent samples).
class ContourSampler {
 public:
  explicit ContourSampler(const ClosedContour& x)
      : n_(x.size()),
        step_(x.grid_step()),
        inv_step_(1.0 / x.grid_step()),
        x1_(x.x1()),
        x2_(x.x2()),
        d1x1_(derivative_samples(x.x1(), x.grid_step(), true, 1)),
        d1x2_(derivative_samples(x.x2(), x.grid_step(), true, 1)),
        d2x1_(derivative_samples(x.x1(), x.grid_step(), true, 2)),
        d2x2_(derivative_samples(x.x2(), x.grid_step(), true, 2)) {}

  double grid_step() const { return step_; }

  Vec2 point_at(double s) const {
    const auto [w, idx] = locate(s);
    return {dot(w, idx, x1_), dot(w, idx, x2_)};
  }
  Vec2 tangent_at(double s) const {
    const auto [w, idx] = locate(s);
    return {dot(w, idx, d1x1_), dot(w, idx, d1x2_)};
  }
  Vec2 second_at(double s) const {
    const auto [w, idx] = locate(s);
    return {dot(w, idx, d2x1_), dot(w, idx, d2x2_)};
  }
  void point_tangent_at(double s, Vec2& p, Vec2& t) const {
    const auto [w, idx] = locate(s);
    p = {dot(w, idx, x1_), dot(w, idx, x2_)};
    t = {dot(w, idx, d1x1_), dot(w, idx, d1x2_)};
  }

 private:
  std::pair<std::array<double, 4>, std::array<std::size_t, 4>> locate(double s) const {
    double t = (s + kPi) * inv_step_;
    const double dn = static_cast<double>(n_);
    t -= dn * std::floor(t / dn);
    long base = static_cast<long>(std::floor(t)) - 1;
    auto w = detail::cubic_weights(t - static_cast<double>(base));
    std::array<std::size_t, 4> idx{};
    for (int i = 0; i < 4; ++i) {
      long k = (base + i) % static_cast<long>(n_);
      if (k < 0) k += static_cast<long>(n_);
      idx[i] = static_cast<std::size_t>(k);
    }
    return {w, idx};
  }

  static double dot(const std::array<double, 4>& w, const std::array<std::size_t, 4>& idx,
                    const std::vector<double>& data) {
    return w[0] * data[idx[0]] + w[1] * data[idx[1]] + w[2] * data[idx[2]] + w[3] * data[idx[3]];
  }

  std::size_t n_;
  double step_, inv_step_;
  std::vector<double> x1_, x2_, d1x1_, d1x2_, d2x1_, d2x2_;
};

/// Curve view of a graph interface: s -> (s, f(s)) with tangent (1, f'(s)).
/// The abscissa is taken exactly, not interpolated.
class GraphCurveSampler {
 public:
  explicit GraphCurveSampler(const InterfaceSampler& f) : f_(f) {}
  Vec2 point_at(double s) const { return {s, f_.value_at(s)}; }
  Vec2 tangent_at(double s) const { return {1.0, f_.deriv_at(s)}; }
  void point_tangent_at(double s, Vec2& p, Vec2& t) const {
    p = {s, f_.value_at(s)};
    t = {1.0, f_.deriv_at(s)};
  }
  const InterfaceSampler& interface_sampler() const { return f_; }

 private:
  const InterfaceSampler& f_;
};

}  // namespace splashcert
