// Entropy-weighted reward aggregation over a toy 4-sample ratio matrix.

#include <iostream>

#include "layoutforge/reward.hpp"

int main() {
  using namespace layoutforge;

  std::vector<std::array<double, 7>> ratios = {
      {1.0, 0.8, 1.0, 0.5, 1.0, 1.0, 1.0},
      {1.0, 0.4, 0.7, 0.5, 0.9, 0.5, 0.6},
      {1.0, 0.9, 0.9, 0.5, 0.2, 0.8, 1.0},
      {1.0, 0.1, 0.8, 0.5, 0.7, 0.2, 0.3},
  };

  RewardReport report = compute_reward_report(ratios);
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}
