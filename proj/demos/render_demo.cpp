// Parses a layout from DSL text and writes its BEV raster to demo.bev.png.

#include <fstream>
#include <iostream>

#include "layoutforge/render.hpp"

int main() {
  using namespace layoutforge;

  const char* dsl =
      "bed {length: 88px; width: 40px; center_x: 120px; center_y: 60px; "
      "orientation: 0 degrees;}\n"
      "nightstand {length: 16px; width: 16px; center_x: 60px; center_y: 60px; "
      "orientation: 0 degrees;}\n"
      "wardrobe {length: 60px; width: 24px; center_x: 120px; center_y: 150px; "
      "orientation: 180 degrees;}\n";

  BevLayout layout = parse_bev_layout(dsl);
  std::string png = rasterize_bev(layout, Room(200, 170, 160));

  std::ofstream("demo.bev.png", std::ios::binary) << png;
  std::cout << "wrote demo.bev.png (" << png.size() << " bytes)\n";
  return 0;
}
