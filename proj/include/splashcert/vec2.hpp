#pragma once

#include <cmath>

namespace splashcert {

/// Plane vector used for contour points, tangents and velocities.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  Vec2 operator+(Vec2 o) const { return {x1 + o.x1, x2 + o.x2}; }
  Vec2 operator-(Vec2 o) const { return {x1 - o.x1, x2 - o.x2}; }
  Vec2 operator*(double s) const { return {x1 * s, x2 * s}; }
  Vec2& operator+=(Vec2 o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  double norm() const { return std::hypot(x1, x2); }
  double norm_sq() const { return x1 * x1 + x2 * x2; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// z-component of the cross product; used for curvature.
inline double wedge(Vec2 a, Vec2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x1) && std::isfinite(v.x2); }

}  // namespace splashcert
