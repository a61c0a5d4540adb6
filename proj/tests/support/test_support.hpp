#pragma once

// Shared helpers for the test suites: fixture paths, scripted oracles and
// transports, random layout generators, and a decoder for the PNGs this
// library writes (filter-0 rows, stored deflate blocks).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "layoutforge/layoutforge.hpp"

namespace lftest {

namespace lf = layoutforge;
namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(LAYOUTFORGE_FIXTURE_DIR); }

inline std::string read_file(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("missing fixture: " + path.string());
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

// ---- scripted oracles -------------------------------------------------- //

/// Oracle that answers from a queue of canned responses, recording every
/// request it sees.
struct QueueOracle {
  std::vector<std::string> responses;
  std::size_t cursor = 0;
  std::vector<lf::OracleRequest> seen;

  lf::OracleFn fn() {
    return [this](const lf::OracleRequest& req) {
      seen.push_back(req);
      if (cursor >= responses.size()) {
        throw lf::TransportError("queue oracle exhausted");
      }
      return responses[cursor++];
    };
  }
};

/// Transport returning a fixed sequence of HTTP results; counts calls.
struct SequenceTransport : lf::Transport {
  std::vector<lf::HttpResult> results;
  std::size_t cursor = 0;
  int calls = 0;

  lf::HttpResult post_json(
      const std::string&, const std::string&,
      const std::vector<std::pair<std::string, std::string>>&,
      const std::string&) override {
    ++calls;
    if (cursor >= results.size()) return results.back();
    return results[cursor++];
  }
};

inline lf::HttpResult ok_chat_response(const std::string& content) {
  lf::json body{
      {"choices",
       lf::json::array({lf::json{{"message", {{"content", content}}}}})}};
  return {200, body.dump(), ""};
}

// ---- random geometry ----------------------------------------------------- //

struct RandomFootprints {
  std::mt19937 rng;
  explicit RandomFootprints(unsigned seed) : rng(seed) {}

  lf::Footprint next() {
    std::uniform_real_distribution<double> center(0.0, 256.0);
    std::uniform_real_distribution<double> extent(2.0, 80.0);
    std::uniform_real_distribution<double> yaw_deg(0.0, 360.0);
    return lf::Footprint({center(rng), center(rng)}, extent(rng) / 2.0,
                         extent(rng) / 2.0, lf::deg_to_rad(yaw_deg(rng)));
  }
};

/// Point-in-OBB check written independently of Footprint::contains.
inline bool oracle_point_in(const lf::Footprint& f, lf::Vec2 p) {
  double c = std::cos(-f.yaw), s = std::sin(-f.yaw);
  double dx = p.x - f.center.x, dy = p.y - f.center.y;
  double local_x = c * dx - s * dy;
  double local_y = s * dx + c * dy;
  return std::abs(local_x) <= f.half_length + 1e-12 &&
         std::abs(local_y) <= f.half_width + 1e-12;
}

/// Uniform boundary-inclusive lattice covering the footprint (per-box
/// sampling oracle). Including the boundary means corners and edges are
/// sampled exactly, which catches corner-nick overlaps of any depth.
inline std::vector<lf::Vec2> grid_points(const lf::Footprint& f, int per_axis) {
  std::vector<lf::Vec2> points;
  points.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      double u = (-1.0 + 2.0 * i / (per_axis - 1)) * f.half_length;
      double v = (-1.0 + 2.0 * j / (per_axis - 1)) * f.half_width;
      double c = std::cos(f.yaw), s = std::sin(f.yaw);
      points.push_back(
          {f.center.x + c * u - s * v, f.center.y + s * u + c * v});
    }
  }
  return points;
}

/// Overlap decision from point-membership sampling only.
inline bool sampling_overlap_oracle(const lf::Footprint& a,
                                    const lf::Footprint& b, int per_axis) {
  for (const auto& p : grid_points(a, per_axis)) {
    if (oracle_point_in(b, p)) return true;
  }
  for (const auto& p : grid_points(b, per_axis)) {
    if (oracle_point_in(a, p)) return true;
  }
  return false;
}

/// Distance from a point to an OBB (0 inside), independent of the library.
inline double oracle_point_box_distance(const lf::Footprint& f, lf::Vec2 p) {
  double c = std::cos(-f.yaw), s = std::sin(-f.yaw);
  double dx = p.x - f.center.x, dy = p.y - f.center.y;
  double lx = std::abs(c * dx - s * dy) - f.half_length;
  double ly = std::abs(s * dx + c * dy) - f.half_width;
  double ox = std::max(lx, 0.0), oy = std::max(ly, 0.0);
  return std::sqrt(ox * ox + oy * oy);
}

/// Estimated distance from tangency, by dense sampling: the deepest
/// penetration when the boxes overlap, the smallest gap when they do not.
/// Used to exempt near-tangent pairs from the SAT-vs-oracle comparison.
inline double tangency_estimate(const lf::Footprint& a, const lf::Footprint& b,
                                int per_axis) {
  auto depth_in = [](const lf::Footprint& f, lf::Vec2 p) {
    double c = std::cos(-f.yaw), s = std::sin(-f.yaw);
    double dx = p.x - f.center.x, dy = p.y - f.center.y;
    return std::min(f.half_length - std::abs(c * dx - s * dy),
                    f.half_width - std::abs(s * dx + c * dy));
  };

  bool overlap = sampling_overlap_oracle(a, b, per_axis);
  if (overlap) {
    double deepest = 0.0;
    for (const auto& p : grid_points(a, per_axis)) {
      if (oracle_point_in(b, p)) {
        deepest = std::max(deepest, std::max(0.0, depth_in(b, p)));
      }
    }
    for (const auto& p : grid_points(b, per_axis)) {
      if (oracle_point_in(a, p)) {
        deepest = std::max(deepest, std::max(0.0, depth_in(a, p)));
      }
    }
    return deepest;
  }
  double gap = 1e300;
  for (const auto& p : grid_points(a, per_axis)) {
    gap = std::min(gap, oracle_point_box_distance(b, p));
  }
  for (const auto& p : grid_points(b, per_axis)) {
    gap = std::min(gap, oracle_point_box_distance(a, p));
  }
  return gap;
}

// ---- minimal PNG decode ------------------------------------------------------ //

struct DecodedImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgb;

  lf::Color at(std::uint32_t x, std::uint32_t y) const {
    std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

inline std::uint32_t read_u32_be(const std::string& s, std::size_t pos) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 1]))
          << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 2]))
          << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos + 3]));
}

/// Decodes exactly the subset of PNG this library emits: RGB8, filter 0,
/// stored deflate blocks.
inline DecodedImage decode_png(const std::string& png) {
  if (png.size() < 8 || png.substr(1, 3) != "PNG") {
    throw std::runtime_error("not a PNG");
  }
  DecodedImage img;
  std::string idat;
  std::size_t pos = 8;
  while (pos + 8 <= png.size()) {
    std::uint32_t len = read_u32_be(png, pos);
    std::string type = png.substr(pos + 4, 4);
    std::string data = png.substr(pos + 8, len);
    if (type == "IHDR") {
      img.width = read_u32_be(data, 0);
      img.height = read_u32_be(data, 4);
      if (data[8] != 8 || data[9] != 2) {
        throw std::runtime_error("unexpected PNG format");
      }
    } else if (type == "IDAT") {
      idat += data;
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }

  // strip the 2-byte zlib header, then walk the stored blocks
  std::string raw;
  std::size_t i = 2;
  while (i < idat.size()) {
    std::uint8_t header = static_cast<std::uint8_t>(idat[i]);
    if ((header & 0x06) != 0) throw std::runtime_error("not a stored block");
    std::uint32_t n = static_cast<std::uint8_t>(idat[i + 1]) |
                      (static_cast<std::uint32_t>(
                           static_cast<std::uint8_t>(idat[i + 2]))
                       << 8);
    raw += idat.substr(i + 5, n);
    i += 5 + n;
    if (header & 1) break;
  }

  std::size_t stride = static_cast<std::size_t>(img.width) * 3 + 1;
  if (raw.size() != stride * img.height) {
    throw std::runtime_error("unexpected raw size");
  }
  img.rgb.reserve(static_cast<std::size_t>(img.width) * img.height * 3);
  for (std::uint32_t y = 0; y < img.height; ++y) {
    if (raw[y * stride] != 0) throw std::runtime_error("unexpected filter");
    for (std::size_t k = 1; k < stride; ++k) {
      img.rgb.push_back(static_cast<std::uint8_t>(raw[y * stride + k]));
    }
  }
  return img;
}

// ---- misc --------------------------------------------------------------------- //

inline lf::BevLayout random_layout(std::mt19937& rng, int max_objects = 6) {
  static const char* labels[] = {"bed",   "desk",  "chair",    "sofa",
                                 "lamp",  "table", "wardrobe", "bookshelf"};
  std::uniform_int_distribution<int> count(1, max_objects);
  std::uniform_real_distribution<double> coord(0.0, 256.0);
  std::uniform_real_distribution<double> extent(1.0, 100.0);
  std::uniform_real_distribution<double> angle(-360.0, 720.0);
  std::uniform_int_distribution<std::size_t> label_pick(0, 7);

  lf::BevLayout layout;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    layout.objects.emplace_back(labels[label_pick(rng)], extent(rng),
                                extent(rng), coord(rng), coord(rng),
                                angle(rng));
  }
  return layout;
}

inline lf::CotRecord make_cot(const lf::BevLayout& layout,
                              const std::string& prompt = "A test scene.") {
  lf::CotRecord cot;
  cot.prompt = prompt;
  cot.entity_extraction = "Objects as listed in the answer.";
  cot.order_decision = "Largest first.";
  cot.spatial_reasoning = "Placed for clearance.";
  cot.answer_organization = lf::serialize_bev_layout(layout);
  return cot;
}

}  // namespace lftest
