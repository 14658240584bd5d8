#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "splashcert/errors.hpp"

namespace splashcert {

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// `nodes` are offsets relative to the evaluation point, `order` is the
/// derivative order. Weights reproduce polynomials up to degree n-1 exactly,
/// so five-point stencils differentiate quartics without error.
template <std::size_t N>
inline std::array<double, N> fd_weights(const std::array<double, N>& nodes, int order) {
  std::array<std::array<double, N>, N> c{};  // c[m][j], m = 0..order
  static_assert(N >= 1);
  double c1 = 1.0;
  c[0][0] = 1.0;
  for (std::size_t n = 1; n < N; ++n) {
    double c2 = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double c3 = nodes[n] - nodes[v];
      c2 *= c3;
      for (int m = std::min<int>(order, static_cast<int>(n)); m >= 0; --m) {
        const double prev = (m > 0) ? c[m - 1][v] : 0.0;
        c[m][v] = (nodes[n] * c[m][v] - m * prev) / c3;
      }
    }
    for (int m = std::min<int>(order, static_cast<int>(n)); m >= 0; --m) {
      const double prev = (m > 0) ? c[m - 1][n - 1] : 0.0;
      c[m][n] = c1 / c2 * (m * prev - nodes[n - 1] * c[m][n - 1]);
    }
    c1 = c2;
  }
  std::array<double, N> w{};
  for (std::size_t j = 0; j < N; ++j) w[j] = c[order][j];
  return w;
}

namespace detail {

/// Five-point weights for derivative `order` with the evaluation point at
/// stencil position `pos` (0..4). pos=2 is the centered stencil; the others
/// are the shifted stencils used at truncated-domain edges.
inline const std::array<double, 5>& stencil5(int order, int pos) {
  static const auto table = [] {
    std::array<std::array<double, 5>, 10> t{};
    for (int m = 1; m <= 2; ++m) {
      for (int p = 0; p < 5; ++p) {
        std::array<double, 5> nodes{};
        for (int i = 0; i < 5; ++i) nodes[i] = static_cast<double>(i - p);
        t[(m - 1) * 5 + p] = fd_weights(nodes, m);
      }
    }
    return t;
  }();
  return table[(order - 1) * 5 + pos];
}

}  // namespace detail

/// Fourth-order first/second derivative samples of uniformly gridded data.
/// Periodic data wraps; truncated data switches to shifted five-point
/// stencils at the two nodes nearest each edge.
inline std::vector<double> derivative_samples(const std::vector<double>& values,
                                              double grid_step, bool periodic, int order) {
  const std::size_t n = values.size();
  if (n < 5) throw NumericalError("derivative_samples: need at least 5 nodes");
  const double scale = 1.0 / (order == 1 ? grid_step : grid_step * grid_step);
  std::vector<double> d(n);
  auto apply = [&](std::size_t j, int pos, const auto& at) {
    const auto& w = detail::stencil5(order, pos);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += w[i] * at(static_cast<long>(j) + i - pos);
    return acc * scale;
  };
  if (periodic) {
    auto at = [&](long idx) {
      const long m = static_cast<long>(n);
      return values[static_cast<std::size_t>(((idx % m) + m) % m)];
    };
    for (std::size_t j = 0; j < n; ++j) d[j] = apply(j, 2, at);
  } else {
    auto at = [&](long idx) { return values[static_cast<std::size_t>(idx)]; };
    for (std::size_t j = 0; j < n; ++j) {
      int pos = 2;
      if (j < 2)
        pos = static_cast<int>(j);
      else if (j >= n - 2)
        pos = static_cast<int>(4 - (n - 1 - j));
      d[j] = apply(j, pos, at);
    }
  }
  return d;
}

}  // namespace splashcert
