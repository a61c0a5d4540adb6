#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "layoutforge/detail/font5x7.hpp"
#include "layoutforge/detail/png.hpp"
#include "layoutforge/errors.hpp"
#include "layoutforge/geometry.hpp"
#include "layoutforge/layout.hpp"

namespace layoutforge {

struct Color {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Color&) const = default;
};

/// Rasterization settings. Identical config + layout yields byte-identical
/// PNG output on every platform: the font is embedded, the palette fixed,
/// and the encoder avoids anything nondeterministic.
struct RasterConfig {
  int scale = 4;            // device pixels per layout px
  int label_scale = 2;      // font magnification
  std::uint8_t fill_alpha = 96;
  Color background{255, 255, 255};
  Color border{0, 0, 0};
  Color label_color{16, 16, 16};
  Color axis_color{128, 128, 128};
  bool axis_arrows = true;
  std::uint64_t max_canvas_area = 4096ull * 4096ull;
};

/// Object colors keyed by list index mod palette size.
inline const std::array<Color, 12>& raster_palette() {
  static const std::array<Color, 12> palette = {{
      {204, 51, 51},    // red
      {51, 102, 204},   // blue
      {46, 153, 61},    // green
      {230, 138, 23},   // orange
      {128, 77, 179},   // purple
      {26, 153, 153},   // teal
      {204, 77, 153},   // pink
      {128, 128, 26},   // olive
      {128, 77, 26},    // brown
      {26, 51, 128},    // navy
      {77, 153, 102},   // sea green
      {153, 102, 204},  // lavender
  }};
  return palette;
}

namespace detail {

inline std::uint8_t blend_channel(std::uint8_t dst, std::uint8_t src,
                                  std::uint8_t alpha) {
  unsigned v = static_cast<unsigned>(src) * alpha +
               static_cast<unsigned>(dst) * (255u - alpha) + 127u;
  return static_cast<std::uint8_t>(v / 255u);
}

struct Canvas {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::string rgb;

  Canvas(std::uint32_t w, std::uint32_t h, Color bg) : width(w), height(h) {
    rgb.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::uint32_t y = 0; y < h; ++y) {
      for (std::uint32_t x = 0; x < w; ++x) set(x, y, bg);
    }
  }

  bool in_bounds(std::int64_t x, std::int64_t y) const {
    return x >= 0 && y >= 0 && x < static_cast<std::int64_t>(width) &&
           y < static_cast<std::int64_t>(height);
  }

  void set(std::int64_t x, std::int64_t y, Color c) {
    if (!in_bounds(x, y)) return;
    std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    rgb[i] = static_cast<char>(c.r);
    rgb[i + 1] = static_cast<char>(c.g);
    rgb[i + 2] = static_cast<char>(c.b);
  }

  Color get(std::int64_t x, std::int64_t y) const {
    std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {static_cast<std::uint8_t>(rgb[i]),
            static_cast<std::uint8_t>(rgb[i + 1]),
            static_cast<std::uint8_t>(rgb[i + 2])};
  }

  void blend(std::int64_t x, std::int64_t y, Color c, std::uint8_t alpha) {
    if (!in_bounds(x, y)) return;
    Color dst = get(x, y);
    set(x, y,
        {blend_channel(dst.r, c.r, alpha), blend_channel(dst.g, c.g, alpha),
         blend_channel(dst.b, c.b, alpha)});
  }

  void line(std::int64_t x0, std::int64_t y0, std::int64_t x1,
            std::int64_t y1, Color c) {
    std::int64_t dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    std::int64_t sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    std::int64_t err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      std::int64_t e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void text(std::int64_t x, std::int64_t y, const std::string& s, Color c,
            int magnify) {
    std::int64_t pen = x;
    for (char ch : s) {
      const auto& glyph = glyph_for(ch);
      for (int col = 0; col < 5; ++col) {
        for (int row = 0; row < 7; ++row) {
          if (!(glyph[col] >> row & 1)) continue;
          for (int my = 0; my < magnify; ++my) {
            for (int mx = 0; mx < magnify; ++mx) {
              set(pen + col * magnify + mx, y + row * magnify + my, c);
            }
          }
        }
      }
      pen += 6 * magnify;
    }
  }
};

inline std::int64_t to_device(double layout_coord, int scale) {
  return static_cast<std::int64_t>(std::llround(layout_coord * scale));
}

}  // namespace detail

inline int text_width_px(const std::string& s, int magnify) {
  if (s.empty()) return 0;
  return static_cast<int>(s.size()) * 6 * magnify - magnify;
}

/// Draws the layout top-down: per object (in list order) a translucent fill
/// and solid outline in the object's palette color, the room border, small
/// axis arrows (x right, y down, matching image space), and each label
/// anchored at its rectangle center. Returns PNG bytes.
inline std::string rasterize_bev(const BevLayout& layout, const Room& room,
                                 const RasterConfig& cfg = {}) {
  if (layout.objects.empty()) throw EmptyLayout();
  if (cfg.scale < 1) throw Error("raster scale must be >= 1");

  std::uint64_t w = static_cast<std::uint64_t>(room.max_length) * cfg.scale;
  std::uint64_t h = static_cast<std::uint64_t>(room.max_width) * cfg.scale;
  if (w * h > cfg.max_canvas_area) {
    throw CanvasTooLarge(w, h, cfg.max_canvas_area);
  }

  detail::Canvas canvas(static_cast<std::uint32_t>(w),
                        static_cast<std::uint32_t>(h), cfg.background);
  const auto& palette = raster_palette();

  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const BevObject& obj = layout.objects[i];
    Footprint fp = Footprint::from_bev(obj);
    Color color = palette[i % palette.size()];

    auto corners = fp.corners();
    double min_x = corners[0].x, max_x = corners[0].x;
    double min_y = corners[0].y, max_y = corners[0].y;
    for (const Vec2& c : corners) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
    std::int64_t px0 = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::floor(min_x * cfg.scale)));
    std::int64_t py0 = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::floor(min_y * cfg.scale)));
    std::int64_t px1 = std::min<std::int64_t>(
        static_cast<std::int64_t>(w) - 1,
        static_cast<std::int64_t>(std::ceil(max_x * cfg.scale)));
    std::int64_t py1 = std::min<std::int64_t>(
        static_cast<std::int64_t>(h) - 1,
        static_cast<std::int64_t>(std::ceil(max_y * cfg.scale)));

    for (std::int64_t py = py0; py <= py1; ++py) {
      for (std::int64_t px = px0; px <= px1; ++px) {
        Vec2 p{(px + 0.5) / cfg.scale, (py + 0.5) / cfg.scale};
        if (fp.contains(p)) canvas.blend(px, py, color, cfg.fill_alpha);
      }
    }
    for (int e = 0; e < 4; ++e) {
      Vec2 a = corners[e], b = corners[(e + 1) % 4];
      canvas.line(detail::to_device(a.x, cfg.scale),
                  detail::to_device(a.y, cfg.scale),
                  detail::to_device(b.x, cfg.scale),
                  detail::to_device(b.y, cfg.scale), color);
    }
  }

  // room border
  canvas.line(0, 0, static_cast<std::int64_t>(w) - 1, 0, cfg.border);
  canvas.line(0, static_cast<std::int64_t>(h) - 1,
              static_cast<std::int64_t>(w) - 1,
              static_cast<std::int64_t>(h) - 1, cfg.border);
  canvas.line(0, 0, 0, static_cast<std::int64_t>(h) - 1, cfg.border);
  canvas.line(static_cast<std::int64_t>(w) - 1, 0,
              static_cast<std::int64_t>(w) - 1,
              static_cast<std::int64_t>(h) - 1, cfg.border);

  if (cfg.axis_arrows) {
    canvas.line(4, 8, 20, 8, cfg.axis_color);
    canvas.line(20, 8, 16, 5, cfg.axis_color);
    canvas.line(20, 8, 16, 11, cfg.axis_color);
    canvas.text(23, 5, "x", cfg.axis_color, 1);
    canvas.line(8, 12, 8, 26, cfg.axis_color);
    canvas.line(8, 26, 5, 22, cfg.axis_color);
    canvas.line(8, 26, 11, 22, cfg.axis_color);
    canvas.text(12, 22, "y", cfg.axis_color, 1);
  }

  // labels last so text stays legible over fills; anchored at the center,
  // drawn just below it so the exact center pixel keeps the fill color
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const BevObject& obj = layout.objects[i];
    std::int64_t cx = detail::to_device(obj.center_x, cfg.scale);
    std::int64_t cy = detail::to_device(obj.center_y, cfg.scale);
    int tw = text_width_px(obj.label, cfg.label_scale);
    canvas.text(cx - tw / 2, cy + 3, obj.label, cfg.label_color,
                cfg.label_scale);
  }

  return detail::encode_png_rgb(canvas.width, canvas.height, canvas.rgb);
}

inline std::string rasterize_bev(const Scene3D& scene,
                                 const RasterConfig& cfg = {}) {
  return rasterize_bev(scene.bev_projection(), scene.room, cfg);
}

/// Fill color a lone object shows at its center on a fresh background.
inline Color expected_fill_on_background(std::size_t object_index,
                                         const RasterConfig& cfg = {}) {
  const auto& palette = raster_palette();
  Color src = palette[object_index % palette.size()];
  return {detail::blend_channel(cfg.background.r, src.r, cfg.fill_alpha),
          detail::blend_channel(cfg.background.g, src.g, cfg.fill_alpha),
          detail::blend_channel(cfg.background.b, src.b, cfg.fill_alpha)};
}

}  // namespace layoutforge
