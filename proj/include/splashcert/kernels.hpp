#pragma once

#include <cmath>
#include <string>

#include "splashcert/errors.hpp"
#include "splashcert/interpolation.hpp"
#include "splashcert/vec2.hpp"

namespace splashcert {

namespace detail {

inline constexpr double kDenominatorFloor = 1e-30;

[[noreturn]] inline void throw_singular(double alpha, double beta) {
  throw SplashError("singular kernel evaluation at alpha = " + std::to_string(alpha) +
                    ", beta = " + std::to_string(beta) + " (interfaces touch)");
}

}  // namespace detail

/// Removable-limit value of the same-interface Muskat kernel at beta -> 0:
/// f''(alpha) / (1 + f'(alpha)^2).
inline double muskat_removable_limit(const InterfaceSampler& f, double alpha) {
  const double d1 = f.deriv_at(alpha);
  return f.second_deriv_at(alpha) / (1.0 + d1 * d1);
}

namespace detail {

// Kernel bodies with the target-point samples hoisted out; the velocity
// assemblies evaluate one target against thousands of offsets.
inline double muskat_kernel_hoisted(const InterfaceSampler& f, const InterfaceSampler& g,
                                    double alpha, double fa, double fpa, double beta) {
  if (&f == &g && std::abs(beta) < 0.5 * f.grid_step()) return muskat_removable_limit(f, alpha);
  double dv, dd;
  g.deltas_at(alpha - beta, fa, fpa, dv, dd);
  const double den = beta * beta + dv * dv;
  if (den < kDenominatorFloor) throw_singular(alpha, beta);
  return beta * dd / den;
}

inline double sigma_kernel_hoisted(const InterfaceSampler& g, double alpha, double fa, double fpa,
                                   double beta) {
  double dv, dd;
  g.deltas_at(alpha - beta, fa, fpa, dv, dd);
  const double den = beta * beta + dv * dv;
  if (den < kDenominatorFloor) throw_singular(alpha, beta);
  return dd / std::sqrt(den);
}

template <class Curve>
inline Vec2 sqg_contour_integrand_hoisted(const Curve& x, Vec2 pa, Vec2 ta, double alpha,
                                          double beta) {
  Vec2 pb, tb;
  x.point_tangent_at(alpha - beta, pb, tb);
  const double dist_sq = (pa - pb).norm_sq();
  if (dist_sq < kDenominatorFloor)
    throw SplashError("sqg_contour_integrand: contour points coincide at beta = " +
                      std::to_string(beta) + " (splash at sample resolution)");
  return (ta - tb) * (1.0 / std::sqrt(dist_sq));
}

template <class Curve>
inline Vec2 muskat_contour_integrand_hoisted(const Curve& x, Vec2 pa, Vec2 ta, double alpha,
                                             double beta) {
  Vec2 pb, tb;
  x.point_tangent_at(alpha - beta, pb, tb);
  const double dist_sq = (pa - pb).norm_sq();
  if (dist_sq < kDenominatorFloor)
    throw SplashError("muskat_contour_integrand: contour points coincide at beta = " +
                      std::to_string(beta) + " (splash at sample resolution)");
  return (ta - tb) * ((pa.x1 - pb.x1) / dist_sq);
}

}  // namespace detail

/// Muskat graph kernel
///
///   K(f,g)(alpha,beta) = beta * (f'(alpha) - g'(alpha-beta))
///                        / (beta^2 + (f(alpha) - g(alpha-beta))^2).
///
/// When f and g are the same sampler object the beta -> 0 singularity is
/// removable; evaluations with |beta| < h/2 return the limit estimate
/// instead of the raw quotient.
inline double muskat_kernel(const InterfaceSampler& f, const InterfaceSampler& g, double alpha,
                            double beta) {
  return detail::muskat_kernel_hoisted(f, g, alpha, f.value_at(alpha), f.deriv_at(alpha), beta);
}

/// Multi-phase SQG kernel
///
///   Sigma(f,g)(alpha,beta) = (f'(alpha) - g'(alpha-beta))
///                            / sqrt(beta^2 + (f(alpha) - g(alpha-beta))^2).
///
/// Bounded but discontinuous across beta = 0 for f = g; quadrature nodes
/// never sit on the jump.
inline double sqg_sigma_kernel(const InterfaceSampler& f, const InterfaceSampler& g, double alpha,
                               double beta) {
  return detail::sigma_kernel_hoisted(g, alpha, f.value_at(alpha), f.deriv_at(alpha), beta);
}

/// Sharp-front SQG contour integrand (x'(a) - x'(a-b)) / |x(a) - x(a-b)|.
/// Works on any curve sampler exposing point_tangent_at.
template <class Curve>
inline Vec2 sqg_contour_integrand(const Curve& x, double alpha, double beta) {
  Vec2 pa, ta;
  x.point_tangent_at(alpha, pa, ta);
  return detail::sqg_contour_integrand_hoisted(x, pa, ta, alpha, beta);
}

/// Single-interface Muskat contour integrand
///
///   (x1(a) - x1(a-b)) * (x'(a) - x'(a-b)) / |x(a) - x(a-b)|^2,
///
/// a principal-value integrand on closed or graph-like curves.
template <class Curve>
inline Vec2 muskat_contour_integrand(const Curve& x, double alpha, double beta) {
  Vec2 pa, ta;
  x.point_tangent_at(alpha, pa, ta);
  return detail::muskat_contour_integrand_hoisted(x, pa, ta, alpha, beta);
}

}  // namespace splashcert
