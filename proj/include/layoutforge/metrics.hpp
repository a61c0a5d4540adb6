#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "layoutforge/geometry.hpp"
#include "layoutforge/layout.hpp"

namespace layoutforge {

/// The two geometric plausibility metrics: rates are offender-count / N.
struct MetricsReport {
  double out_of_bound_rate = 0.0;
  double collision_rate = 0.0;
  std::vector<std::size_t> offenders_oob;
  std::vector<std::size_t> offenders_collision;

  json to_json() const {
    return json{{"out_of_bound_rate", out_of_bound_rate},
                {"collision_rate", collision_rate},
                {"offenders_oob", offenders_oob},
                {"offenders_collision", offenders_collision}};
  }
};

/// An object offends when its footprint leaves the room or its z-interval
/// leaves [0, max_height], both with the given tolerance.
inline std::pair<double, std::vector<std::size_t>> out_of_bound_rate(
    const Scene3D& scene, double tolerance = 0.5) {
  if (scene.objects.empty()) throw EmptyScene();
  std::vector<std::size_t> offenders;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& o = scene.objects[i];
    bool oob = is_out_of_bound(Footprint::from_bev(o.footprint()), scene.room,
                               tolerance) ||
               o.z_lo() < -tolerance ||
               o.z_hi() > scene.room.max_height + tolerance;
    if (oob) offenders.push_back(i);
  }
  double rate = static_cast<double>(offenders.size()) /
                static_cast<double>(scene.objects.size());
  return {rate, offenders};
}

/// An object offends when it collides with any other object; the rate counts
/// objects, not pairs. Pairwise scan.
inline std::pair<double, std::vector<std::size_t>> collision_rate(
    const Scene3D& scene, double epsilon = 1.0) {
  if (scene.objects.empty()) throw EmptyScene();
  std::size_t n = scene.objects.size();
  std::vector<Box3D> boxes;
  boxes.reserve(n);
  for (const auto& o : scene.objects) {
    boxes.push_back(Box3D::from_scene_object(o));
  }
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (boxes_collide_3d(boxes[i], boxes[j], epsilon)) {
        hit[i] = true;
        hit[j] = true;
      }
    }
  }
  std::vector<std::size_t> offenders;
  for (std::size_t i = 0; i < n; ++i) {
    if (hit[i]) offenders.push_back(i);
  }
  double rate =
      static_cast<double>(offenders.size()) / static_cast<double>(n);
  return {rate, offenders};
}

inline MetricsReport compute_metrics(const Scene3D& scene,
                                     double epsilon = 1.0,
                                     double tolerance = 0.5) {
  MetricsReport report;
  auto [oob, oob_idx] = out_of_bound_rate(scene, tolerance);
  auto [col, col_idx] = collision_rate(scene, epsilon);
  report.out_of_bound_rate = oob;
  report.offenders_oob = std::move(oob_idx);
  report.collision_rate = col;
  report.offenders_collision = std::move(col_idx);
  return report;
}

}  // namespace layoutforge
