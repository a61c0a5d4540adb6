#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "layoutforge/errors.hpp"
#include "layoutforge/layout.hpp"

namespace layoutforge {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Oriented rectangle in the BEV plane. Yaw is radians counterclockwise;
/// at yaw 0 the length (2*half_length) runs along +x and the width along +y.
struct Footprint {
  Vec2 center;
  double half_length = 0.0;
  double half_width = 0.0;
  double yaw = 0.0;

  Footprint() = default;
  Footprint(Vec2 center_, double half_length_, double half_width_, double yaw_)
      : center(center_),
        half_length(half_length_),
        half_width(half_width_),
        yaw(yaw_) {
    if (!(half_length > 0.0) || !(half_width > 0.0)) {
      throw NonpositiveExtent("footprint half extents must be positive");
    }
  }

  static Footprint from_bev(const BevObject& o) {
    return Footprint({o.center_x, o.center_y}, o.length / 2.0, o.width / 2.0,
                     deg_to_rad(o.orientation));
  }

  Vec2 length_axis() const { return {std::cos(yaw), std::sin(yaw)}; }
  Vec2 width_axis() const { return {-std::sin(yaw), std::cos(yaw)}; }

  /// Corners in counterclockwise order starting at (+length, +width).
  std::array<Vec2, 4> corners() const {
    Vec2 u = length_axis() * half_length;
    Vec2 v = width_axis() * half_width;
    return {center + u + v, center - u + v, center - u - v, center + u - v};
  }

  bool contains(Vec2 p) const {
    Vec2 d = p - center;
    return std::abs(d.dot(length_axis())) <= half_length &&
           std::abs(d.dot(width_axis())) <= half_width;
  }
};

inline std::array<Vec2, 4> footprint_corners(const Footprint& f) {
  return f.corners();
}

/// Separating-axis overlap test over the four edge normals, with each box
/// shrunk by epsilon/2 along every axis direction. Contact closer than
/// epsilon therefore counts as non-overlap.
inline bool footprints_overlap(const Footprint& a, const Footprint& b,
                               double epsilon = 0.0) {
  double shrink = epsilon / 2.0;
  double ahl = std::max(0.0, a.half_length - shrink);
  double ahw = std::max(0.0, a.half_width - shrink);
  double bhl = std::max(0.0, b.half_length - shrink);
  double bhw = std::max(0.0, b.half_width - shrink);

  Vec2 a1 = a.length_axis(), a2 = a.width_axis();
  Vec2 b1 = b.length_axis(), b2 = b.width_axis();
  Vec2 d = b.center - a.center;

  const Vec2 axes[4] = {a1, a2, b1, b2};
  for (Vec2 axis : axes) {
    double ra = ahl * std::abs(axis.dot(a1)) + ahw * std::abs(axis.dot(a2));
    double rb = bhl * std::abs(axis.dot(b1)) + bhw * std::abs(axis.dot(b2));
    if (std::abs(axis.dot(d)) >= ra + rb) return false;
  }
  return true;
}

namespace detail {

inline double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? clamp01((p - a).dot(ab) / len2) : 0.0;
  return (p - (a + ab * t)).norm();
}

inline double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  };
  double d1 = orient(a0, a1, b0), d2 = orient(a0, a1, b1);
  double d3 = orient(b0, b1, a0), d4 = orient(b0, b1, a1);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
  return std::min(std::min(point_segment_distance(b0, a0, a1),
                           point_segment_distance(b1, a0, a1)),
                  std::min(point_segment_distance(a0, b0, b1),
                           point_segment_distance(a1, b0, b1)));
}

}  // namespace detail

/// Minimum Euclidean distance between the two rectangles (boundaries or
/// interiors); 0 when they overlap or touch.
inline double min_footprint_distance(const Footprint& a, const Footprint& b) {
  if (footprints_overlap(a, b, 0.0)) return 0.0;
  if (a.contains(b.center) || b.contains(a.center)) return 0.0;

  auto ca = a.corners();
  auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, detail::segment_segment_distance(
                                ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4]));
    }
  }
  return best;
}

/// True iff any rotated corner leaves the room rectangle grown by tolerance.
inline bool is_out_of_bound(const Footprint& f, const Room& room,
                            double tolerance = 0.0) {
  double lo_x = -tolerance, hi_x = room.max_length + tolerance;
  double lo_y = -tolerance, hi_y = room.max_width + tolerance;
  for (Vec2 c : f.corners()) {
    if (c.x < lo_x || c.x > hi_x || c.y < lo_y || c.y > hi_y) return true;
  }
  return false;
}

/// Axis-aligned z-interval stacked on a footprint.
struct Box3D {
  Footprint footprint;
  double z_lo = 0.0;
  double z_hi = 0.0;

  Box3D() = default;
  Box3D(Footprint fp, double z_lo_, double z_hi_)
      : footprint(fp), z_lo(z_lo_), z_hi(z_hi_) {
    if (!(z_lo < z_hi)) {
      throw NonpositiveExtent("z interval must satisfy z_lo < z_hi");
    }
  }

  static Box3D from_scene_object(const SceneObject3D& o) {
    return Box3D(Footprint::from_bev(o.footprint()), o.z_lo(), o.z_hi());
  }
};

/// Footprints overlap (SAT, shrunk by epsilon) and z-intervals overlap by
/// more than epsilon. Vertical stacking with disjoint z never collides.
inline bool boxes_collide_3d(const Box3D& a, const Box3D& b,
                             double epsilon = 0.0) {
  if (!footprints_overlap(a.footprint, b.footprint, epsilon)) return false;
  double overlap = std::min(a.z_hi, b.z_hi) - std::max(a.z_lo, b.z_lo);
  return overlap > epsilon;
}

}  // namespace layoutforge
