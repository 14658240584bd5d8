#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>

#include "splashcert/errors.hpp"
#include "splashcert/geometry.hpp"
#include "splashcert/interpolation.hpp"
#include "splashcert/kernels.hpp"

namespace splashcert {

namespace detail {

template <class T>
inline void check_finite(const T& v, double beta) {
  if (!is_finite(v))
    throw NumericalError("quadrature: non-finite integrand value at beta = " +
                         std::to_string(beta));
}

/// Symmetric midpoint-offset rule shared by the periodic and truncated
/// rules: nodes at +-(k + 1/2) * h, summed in pairs from the inside out so
/// integrands with exact odd symmetry cancel bitwise.
template <class F>
inline auto midpoint_symmetric(F&& integrand, double half_width, std::size_t n_nodes) {
  if (n_nodes == 0 || n_nodes % 2 != 0)
    throw ConfigError("quadrature: node count must be positive and even");
  const double h = 2.0 * half_width / static_cast<double>(n_nodes);
  using R = std::decay_t<decltype(integrand(h))>;
  R acc{};
  for (std::size_t k = 0; k < n_nodes / 2; ++k) {
    const double beta = (static_cast<double>(k) + 0.5) * h;
    const R plus = integrand(beta);
    check_finite(plus, beta);
    const R minus = integrand(-beta);
    check_finite(minus, -beta);
    acc += plus + minus;
  }
  return acc * h;
}

}  // namespace detail

/// Principal-value integral over [-pi, pi): midpoint-offset nodes
/// beta_k = (k + 1/2) * 2*pi/N, symmetric about 0, never evaluating beta = 0.
template <class F>
inline auto pv_integrate_periodic(F&& integrand, std::size_t n_nodes) {
  return detail::midpoint_symmetric(std::forward<F>(integrand), kPi, n_nodes);
}

/// Midpoint rule on [-L, L] excluding 0. The neglected tail of an
/// integrand decaying like |beta|^-2 is O(1/L); runs report that scale
/// rather than correcting for it.
template <class F>
inline auto integrate_realline(F&& integrand, double half_width, std::size_t n_nodes) {
  if (!(half_width > 1.0))
    throw ConfigError("integrate_realline: truncation half-width must exceed 1");
  return detail::midpoint_symmetric(std::forward<F>(integrand), half_width, n_nodes);
}

/// The integrand of d/dt (f - g) at a fixed alpha: the combination of the
/// four Muskat kernels entering f_t minus the one entering g_t.
class PairGapIntegrand {
 public:
  PairGapIntegrand(const PhasePair& pair, double alpha)
      : f_(pair.f),
        g_(pair.g),
        alpha_(alpha),
        zeta21_(pair.zeta21()),
        zeta32_(pair.zeta32()),
        fa_(f_.value_at(alpha)),
        fpa_(f_.deriv_at(alpha)),
        ga_(g_.value_at(alpha)),
        gpa_(g_.deriv_at(alpha)) {}

  double operator()(double beta) const {
    const double k_ff = detail::muskat_kernel_hoisted(f_, f_, alpha_, fa_, fpa_, beta);
    const double k_fg = detail::muskat_kernel_hoisted(f_, g_, alpha_, fa_, fpa_, beta);
    const double k_gg = detail::muskat_kernel_hoisted(g_, g_, alpha_, ga_, gpa_, beta);
    const double k_gf = detail::muskat_kernel_hoisted(g_, f_, alpha_, ga_, gpa_, beta);
    return zeta21_ * (k_ff - k_gf) + zeta32_ * (k_fg - k_gg);
  }

 private:
  InterfaceSampler f_, g_;
  double alpha_;
  double zeta21_, zeta32_;
  double fa_, fpa_, ga_, gpa_;
};

/// Partial integrals of the gap velocity integrand over the regions
/// |beta| < S, S < |beta| < 1 and |beta| > 1.
struct SplitTerms {
  double inner = 0.0;   // |beta| < S
  double middle = 0.0;  // S < |beta| < 1
  double outer = 0.0;   // 1 < |beta| <= L
  double sum() const { return inner + middle + outer; }
};

/// Splits the truncated-domain quadrature of f_t(alpha_min) - g_t(alpha_min)
/// by region. The three node sets partition the unsplit rule, so
/// inner + middle + outer reproduces the unsplit quadrature to roundoff.
inline SplitTerms split_terms(const PhasePair& pair, double separation, double alpha_min,
                              double half_width, std::size_t n_nodes) {
  if (!(separation < 1.0))
    throw ConfigError("split_terms: middle region is empty (separation >= 1)");
  if (pair.f.domain() == DomainKind::real_line) {
    const double far_gap = pair.f.far_field() - pair.g.far_field();
    if (!(separation < far_gap))
      throw ConfigError("split_terms: separation must stay below the far-field gap");
  }
  if (!(half_width > 1.0))
    throw ConfigError("split_terms: truncation half-width must exceed 1 (region III empty)");
  if (n_nodes == 0 || n_nodes % 2 != 0)
    throw ConfigError("split_terms: node count must be positive and even");

  const PairGapIntegrand integrand(pair, alpha_min);
  const double h = 2.0 * half_width / static_cast<double>(n_nodes);
  SplitTerms out;
  for (std::size_t k = 0; k < n_nodes / 2; ++k) {
    const double beta = (static_cast<double>(k) + 0.5) * h;
    const double pair_sum = integrand(beta) + integrand(-beta);
    detail::check_finite(pair_sum, beta);
    if (beta < separation)
      out.inner += pair_sum;
    else if (beta < 1.0)
      out.middle += pair_sum;
    else
      out.outer += pair_sum;
  }
  out.inner *= h;
  out.middle *= h;
  out.outer *= h;
  return out;
}

}  // namespace splashcert
