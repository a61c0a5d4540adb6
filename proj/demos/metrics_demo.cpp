// Builds a small scene in code and prints its plausibility metrics.

#include <iostream>

#include "layoutforge/metrics.hpp"

int main() {
  using namespace layoutforge;

  Scene3D scene;
  scene.room = Room(200, 150, 160);
  scene.objects.emplace_back("dining table", 80, 40, 30, 100, 75, 15, 0,
                             "A rectangular oak dining table.");
  scene.objects.emplace_back("chair", 20, 20, 45, 100, 45, 22.5, 180,
                             "A ladder-back wooden chair.");
  scene.objects.emplace_back("ceiling lamp", 30, 30, 10, 100, 75, 140, 0,
                             "A dome pendant lamp.");

  MetricsReport report = compute_metrics(scene, /*epsilon=*/1.0,
                                         /*tolerance=*/0.5);
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}
