#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layoutforge/detail/util.hpp"
#include "layoutforge/errors.hpp"

namespace layoutforge {

using json = nlohmann::json;

/// Room extents in layout pixels. x runs along max_length (horizontal),
/// y along max_width (vertical), z along max_height.
struct Room {
  int max_length = 0;
  int max_width = 0;
  int max_height = 0;

  Room() = default;
  Room(int length, int width, int height)
      : max_length(length), max_width(width), max_height(height) {
    validate();
  }

  void validate() const {
    auto check = [](int v, const char* name) {
      if (v < 1 || v > 256) {
        throw RoomBoundViolation(std::string(name) + " = " +
                                 std::to_string(v) + " outside [1, 256]");
      }
    };
    check(max_length, "max_length");
    check(max_width, "max_width");
    check(max_height, "max_height");
  }

  bool operator==(const Room&) const = default;
};

/// Maps any angle in degrees to [0, 360).
inline double normalize_orientation(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  if (r == 0.0) r = 0.0;  // fold -0
  return r;
}

/// One placed object's top-view footprint. Orientation is degrees
/// counterclockwise; at 0 the length runs along +x and the width along +y.
struct BevObject {
  std::string label;
  double length = 0.0;
  double width = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double orientation = 0.0;

  BevObject() = default;
  BevObject(std::string label_, double length_, double width_,
            double center_x_, double center_y_, double orientation_)
      : label(std::move(label_)),
        length(length_),
        width(width_),
        center_x(center_x_),
        center_y(center_y_),
        orientation(normalize_orientation(orientation_)) {
    validate();
  }

  void validate() const {
    std::string_view trimmed = detail::trim(label);
    if (trimmed.empty()) throw InvalidObject("object label is empty");
    if (label.find('{') != std::string::npos ||
        label.find(';') != std::string::npos) {
      throw InvalidObject("object label contains '{' or ';': " + label);
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw InvalidObject("length must be positive, got " +
                          detail::format_real(length));
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw InvalidObject("width must be positive, got " +
                          detail::format_real(width));
    }
    if (!std::isfinite(center_x) || !std::isfinite(center_y) ||
        !std::isfinite(orientation)) {
      throw InvalidObject("non-finite coordinate in object " + label);
    }
  }

  bool operator==(const BevObject&) const = default;
};

struct BevLayout {
  std::vector<BevObject> objects;

  bool operator==(const BevLayout&) const = default;
};

/// A lifted object: footprint plus vertical placement and the one-sentence
/// prompt that drives asset generation (empty until lifting fills it in).
struct SceneObject3D {
  std::string label;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double center_z = 0.0;
  double orientation = 0.0;
  std::string asset_prompt;

  SceneObject3D() = default;
  SceneObject3D(std::string label_, double length_, double width_,
                double height_, double center_x_, double center_y_,
                double center_z_, double orientation_,
                std::string asset_prompt_ = "")
      : label(std::move(label_)),
        length(length_),
        width(width_),
        height(height_),
        center_x(center_x_),
        center_y(center_y_),
        center_z(center_z_),
        orientation(normalize_orientation(orientation_)),
        asset_prompt(std::move(asset_prompt_)) {
    BevObject(label, length, width, center_x, center_y, orientation);
    if (!(height > 0.0) || !std::isfinite(height)) {
      throw InvalidObject("height must be positive, got " +
                          detail::format_real(height));
    }
    if (!std::isfinite(center_z)) {
      throw InvalidObject("non-finite center_z in object " + label);
    }
  }

  BevObject footprint() const {
    return BevObject(label, length, width, center_x, center_y, orientation);
  }

  double z_lo() const { return center_z - height / 2.0; }
  double z_hi() const { return center_z + height / 2.0; }

  bool operator==(const SceneObject3D&) const = default;
};

struct Scene3D {
  Room room;
  std::vector<SceneObject3D> objects;

  BevLayout bev_projection() const {
    BevLayout out;
    out.objects.reserve(objects.size());
    for (const auto& o : objects) out.objects.push_back(o.footprint());
    return out;
  }

  /// z-interval findings against the room; empty means every object fits.
  std::vector<std::string> z_bound_findings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const auto& o = objects[i];
      if (o.z_lo() < 0.0 || o.z_hi() > static_cast<double>(room.max_height)) {
        out.push_back("object " + std::to_string(i) + " (" + o.label +
                      ") occupies z [" + detail::format_real(o.z_lo()) + ", " +
                      detail::format_real(o.z_hi()) + "] outside [0, " +
                      std::to_string(room.max_height) + "]");
      }
    }
    return out;
  }

  bool operator==(const Scene3D&) const = default;
};

// ---- DSL parsing ------------------------------------------------------ //
//
// Per line: <label> "{" "length:" <num> "px;" "width:" <num> "px;"
//           ["height:" <num> "px;"] "center_x:" <num> "px;"
//           "center_y:" <num> "px;" ["center_z:" <num> "px;"]
//           "orientation:" <num> "degrees;" "}"
// 3D lines carry both optional groups, BEV lines neither. Whitespace around
// tokens is tolerated; key order is fixed.

namespace detail {

struct DslCursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && is_space(s[pos])) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (s.substr(pos, w.size()) == w) {
      // keys and units must not run into the next identifier character
      std::size_t end = pos + w.size();
      if (end < s.size()) {
        char c = s[end];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
          return false;
        }
      }
      pos += w.size();
      return true;
    }
    return false;
  }
  std::optional<double> number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    bool digits = false;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) ||
            s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '-' || s[pos] == '+') && pos > start &&
             (s[pos - 1] == 'e' || s[pos - 1] == 'E')))) {
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) digits = true;
      ++pos;
    }
    if (!digits) {
      pos = start;
      return std::nullopt;
    }
    return parse_real(s.substr(start, pos - start));
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
};

struct DslField {
  const char* key;
  const char* unit;
};

inline constexpr DslField kBevFields[] = {{"length", "px"},
                                          {"width", "px"},
                                          {"center_x", "px"},
                                          {"center_y", "px"},
                                          {"orientation", "degrees"}};

inline constexpr DslField k3dFields[] = {
    {"length", "px"},   {"width", "px"},    {"height", "px"},
    {"center_x", "px"}, {"center_y", "px"}, {"center_z", "px"},
    {"orientation", "degrees"}};

/// Parses one DSL line into (label, field values in grammar order).
/// Throws MalformedLine with the supplied physical line number.
template <std::size_t N>
std::pair<std::string, std::array<double, N>> parse_dsl_line(
    std::string_view line, const DslField (&fields)[N], int line_no) {
  auto fail = [&](const std::string& why) -> void {
    throw MalformedLine(line_no, why);
  };

  std::size_t brace = line.find('{');
  if (brace == std::string_view::npos) fail("missing '{'");
  std::string label(trim(line.substr(0, brace)));
  if (label.empty()) fail("empty label");
  if (label.find(';') != std::string::npos) fail("label contains ';'");

  DslCursor cur{line.substr(brace + 1)};
  std::array<double, N> values{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!cur.eat_word(fields[i].key)) {
      cur.skip_ws();
      std::size_t start = cur.pos;
      while (cur.pos < cur.s.size() &&
             (std::isalnum(static_cast<unsigned char>(cur.s[cur.pos])) ||
              cur.s[cur.pos] == '_')) {
        ++cur.pos;
      }
      std::string got(cur.s.substr(start, cur.pos - start));
      fail(got.empty()
               ? std::string("missing field '") + fields[i].key + "'"
               : "expected field '" + std::string(fields[i].key) +
                     "', got '" + got + "'");
    }
    if (!cur.eat(':')) fail(std::string("missing ':' after ") + fields[i].key);
    auto num = cur.number();
    if (!num) fail(std::string("unparseable number for ") + fields[i].key);
    if (!cur.eat_word(fields[i].unit)) {
      fail(std::string("missing unit '") + fields[i].unit + "' for " +
           fields[i].key);
    }
    if (!cur.eat(';')) fail(std::string("missing ';' after ") + fields[i].key);
    values[i] = *num;
  }
  if (!cur.eat('}')) fail("missing '}'");
  if (!cur.at_end()) fail("trailing characters after '}'");
  return {std::move(label), values};
}

}  // namespace detail

/// Parses multi-line BEV DSL text; one object per nonblank line, order kept.
inline BevLayout parse_bev_layout(std::string_view text) {
  BevLayout layout;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    int line_no = static_cast<int>(i) + 1;
    auto [label, v] = detail::parse_dsl_line(lines[i], detail::kBevFields,
                                             line_no);
    try {
      layout.objects.emplace_back(std::move(label), v[0], v[1], v[2], v[3],
                                  v[4]);
    } catch (const InvalidObject& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  if (layout.objects.empty()) throw EmptyLayout();
  return layout;
}

inline std::string serialize_bev_object(const BevObject& o) {
  using detail::format_real;
  return o.label + " {length: " + format_real(o.length) +
         "px; width: " + format_real(o.width) +
         "px; center_x: " + format_real(o.center_x) +
         "px; center_y: " + format_real(o.center_y) +
         "px; orientation: " + format_real(o.orientation) + " degrees;}";
}

/// Canonical form: one line per object, grammar field order, shortest
/// round-trip numbers. parse(serialize(L)) == L, field-exact.
inline std::string serialize_bev_layout(const BevLayout& layout) {
  if (layout.objects.empty()) throw EmptyLayout();
  std::string out;
  for (const auto& o : layout.objects) {
    out += serialize_bev_object(o);
    out += '\n';
  }
  return out;
}

inline std::string serialize_scene_object(const SceneObject3D& o) {
  using detail::format_real;
  return o.label + " {length: " + format_real(o.length) +
         "px; width: " + format_real(o.width) +
         "px; height: " + format_real(o.height) +
         "px; center_x: " + format_real(o.center_x) +
         "px; center_y: " + format_real(o.center_y) +
         "px; center_z: " + format_real(o.center_z) +
         "px; orientation: " + format_real(o.orientation) + " degrees;}";
}

/// Layout lines only; asset prompts are carried separately.
inline std::string serialize_scene3d(const Scene3D& scene) {
  if (scene.objects.empty()) throw EmptyLayout();
  std::string out;
  for (const auto& o : scene.objects) {
    out += serialize_scene_object(o);
    out += '\n';
  }
  return out;
}

/// Parses multi-line 7-field DSL text into objects with empty prompts.
inline std::vector<SceneObject3D> parse_scene3d_lines(std::string_view text) {
  std::vector<SceneObject3D> objects;
  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    int line_no = static_cast<int>(i) + 1;
    auto [label, v] =
        detail::parse_dsl_line(lines[i], detail::k3dFields, line_no);
    try {
      objects.emplace_back(std::move(label), v[0], v[1], v[2], v[3], v[4],
                           v[5], v[6]);
    } catch (const InvalidObject& e) {
      throw MalformedLine(line_no, e.what());
    }
  }
  if (objects.empty()) throw EmptyLayout();
  return objects;
}

// ---- structured payload helpers ---------------------------------------- //

namespace detail {

/// Case/underscore-insensitive member lookup ("Entity Extraction" matches
/// "entity_extraction"). Returns nullptr when absent.
inline const json* find_key(const json& obj, std::string_view name) {
  if (!obj.is_object()) return nullptr;
  std::string want = normalize_key(name);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (normalize_key(it.key()) == want) return &it.value();
  }
  return nullptr;
}

inline std::string text_or_joined_lines(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!item.is_string()) break;
      if (!out.empty()) out += '\n';
      out += item.get<std::string>();
    }
    if (out.size() || v.empty()) return out;
  }
  return v.dump();
}

}  // namespace detail

/// Parses the lifting response: {"3D_layout": [...lines...],
/// "object_prompts": [...]} with the prompt list zipped on by index.
inline std::vector<SceneObject3D> parse_scene3d(const json& payload) {
  const json* layout = detail::find_key(payload, "3D_layout");
  if (!layout) throw MissingField("3D_layout");
  const json* prompts = detail::find_key(payload, "object_prompts");
  if (!prompts) throw MissingField("object_prompts");

  std::string lines;
  if (layout->is_array()) {
    for (const auto& item : *layout) {
      if (!item.is_string()) {
        throw MalformedLine(0, "3D_layout entries must be strings");
      }
      lines += item.get<std::string>();
      lines += '\n';
    }
  } else if (layout->is_string()) {
    lines = layout->get<std::string>();
  } else {
    throw MalformedLine(0, "3D_layout must be a list or string");
  }

  std::vector<SceneObject3D> objects = parse_scene3d_lines(lines);

  if (!prompts->is_array()) {
    throw LengthMismatch(objects.size(), prompts->is_string() ? 1 : 0);
  }
  if (prompts->size() != objects.size()) {
    throw LengthMismatch(objects.size(), prompts->size());
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const json& p = (*prompts)[i];
    objects[i].asset_prompt = p.is_string() ? p.get<std::string>() : p.dump();
  }
  return objects;
}

inline std::vector<SceneObject3D> parse_scene3d(std::string_view payload) {
  json j = json::parse(payload, nullptr, true);
  return parse_scene3d(j);
}

// ---- CoT records ------------------------------------------------------- //

/// Four-step reasoning transcript plus the prompt it answers. The
/// answer_organization text always parses under the BEV grammar.
struct CotRecord {
  std::string prompt;
  std::string entity_extraction;
  std::string order_decision;
  std::string spatial_reasoning;
  std::string answer_organization;

  BevLayout answer_layout() const {
    return parse_bev_layout(answer_organization);
  }

  json steps_json() const {
    return json{{"Entity Extraction", entity_extraction},
                {"Order Decision", order_decision},
                {"Spatial Reasoning", spatial_reasoning},
                {"Answer Organization", answer_organization}};
  }

  json to_json() const {
    return json{{"prompt", prompt}, {"response", steps_json()}};
  }

  bool operator==(const CotRecord&) const = default;
};

/// Accepts both {"prompt":..., "response": {steps...}} and flat payloads;
/// key matching is case/underscore tolerant. answer_organization may be a
/// string or a list of layout lines.
inline CotRecord parse_cot_record(const json& payload) {
  const json* root = &payload;
  const json* response = detail::find_key(payload, "response");
  const json* steps = response && response->is_object() ? response : root;

  auto fetch = [&](const json& obj, std::string_view name,
                   bool join_lines) -> std::string {
    const json* v = detail::find_key(obj, name);
    if (!v) throw MissingField(std::string(name));
    std::string text =
        join_lines ? detail::text_or_joined_lines(*v)
                   : (v->is_string() ? v->get<std::string>() : v->dump());
    if (detail::trim(text).empty()) throw MissingField(std::string(name));
    return text;
  };

  CotRecord rec;
  rec.prompt = fetch(*root, "prompt", false);
  rec.entity_extraction = fetch(*steps, "Entity Extraction", false);
  rec.order_decision = fetch(*steps, "Order Decision", false);
  rec.spatial_reasoning = fetch(*steps, "Spatial Reasoning", false);
  rec.answer_organization = fetch(*steps, "Answer Organization", true);

  try {
    parse_bev_layout(rec.answer_organization);
  } catch (const Error& e) {
    throw AnswerUnparseable(e.what());
  }
  return rec;
}

inline CotRecord parse_cot_record(std::string_view payload) {
  return parse_cot_record(json::parse(payload, nullptr, true));
}

// ---- CoT consistency --------------------------------------------------- //

struct ConsistencyFinding {
  enum class Kind { UnmentionedLabel, CountMismatch };
  Kind kind;
  std::string label;
  int expected = 0;  // CountMismatch only
  int got = 0;

  bool operator==(const ConsistencyFinding&) const = default;
};

struct ConsistencyReport {
  std::vector<ConsistencyFinding> findings;
  bool empty() const { return findings.empty(); }
};

namespace detail {

inline std::optional<int> parse_count_word(std::string_view token) {
  static const std::pair<const char*, int> words[] = {
      {"one", 1},  {"two", 2},  {"three", 3}, {"four", 4},
      {"five", 5}, {"six", 6},  {"seven", 7}, {"eight", 8},
      {"nine", 9}, {"ten", 10}, {"eleven", 11}, {"twelve", 12}};
  for (const auto& [w, n] : words) {
    if (token == w) return n;
  }
  int value = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec == std::errc() && res.ptr == token.data() + token.size()) {
    return value;
  }
  return std::nullopt;
}

inline std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char raw : text) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

/// True when `tok` is `stem` up to a plural suffix ("chairs" vs "chair").
inline bool plural_matches(std::string_view tok, std::string_view stem) {
  if (tok == stem) return true;
  if (tok.size() == stem.size() + 1 && tok.back() == 's' &&
      tok.substr(0, stem.size()) == stem) {
    return true;
  }
  if (tok.size() == stem.size() + 2 && tok.substr(stem.size()) == "es" &&
      tok.substr(0, stem.size()) == stem) {
    return true;
  }
  return false;
}

}  // namespace detail

/// Advisory cross-check of the answer layout against the entity-extraction
/// step: flags answer labels never mentioned in the entities text and count
/// mismatches where an explicit number sits next to a label mention.
inline ConsistencyReport check_cot_consistency(const CotRecord& record) {
  ConsistencyReport report;
  BevLayout layout = record.answer_layout();

  std::map<std::string, int> actual_counts;
  for (const auto& o : layout.objects) {
    ++actual_counts[detail::normalize_class(o.label)];
  }

  std::string entities_lower = detail::to_lower(record.entity_extraction);
  std::vector<std::string> entity_tokens =
      detail::word_tokens(record.entity_extraction);

  for (const auto& [label, actual] : actual_counts) {
    std::vector<std::string> label_tokens = detail::word_tokens(label);
    if (label_tokens.empty()) continue;

    bool mentioned = entities_lower.find(label) != std::string::npos;

    std::optional<int> expected;
    for (std::size_t i = 0; i + label_tokens.size() <= entity_tokens.size();
         ++i) {
      bool match = true;
      for (std::size_t k = 0; k < label_tokens.size(); ++k) {
        bool last = (k + 1 == label_tokens.size());
        const std::string& tok = entity_tokens[i + k];
        if (last ? !detail::plural_matches(tok, label_tokens[k])
                 : tok != label_tokens[k]) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      mentioned = true;
      if (!expected && i > 0) {
        expected = detail::parse_count_word(entity_tokens[i - 1]);
      }
    }

    if (!mentioned) {
      report.findings.push_back({ConsistencyFinding::Kind::UnmentionedLabel,
                                 label, 0, actual});
      continue;
    }
    if (expected && *expected != actual) {
      report.findings.push_back({ConsistencyFinding::Kind::CountMismatch,
                                 label, *expected, actual});
    }
  }
  return report;
}

// ---- scene files -------------------------------------------------------- //
//
// On-disk scene format: a `room {length: ..px; width: ..px; height: ..px;}`
// header line followed by DSL object lines (BEV or 3D, not mixed).

struct SceneFile {
  Room room;
  std::optional<Scene3D> scene3d;    // set when object lines carry height
  std::optional<BevLayout> bev;      // set otherwise

  Scene3D require_3d() const {
    if (!scene3d) throw Error("scene file does not carry 3D object lines");
    return *scene3d;
  }
};

namespace detail {

inline constexpr DslField kRoomFields[] = {{"length", "px"},
                                           {"width", "px"},
                                           {"height", "px"}};

}  // namespace detail

inline SceneFile parse_scene_file(std::string_view text) {
  auto lines = detail::split_lines(text);
  SceneFile out;
  std::size_t i = 0;
  while (i < lines.size() && detail::trim(lines[i]).empty()) ++i;
  if (i >= lines.size()) throw EmptyLayout();

  auto [header_label, dims] = detail::parse_dsl_line(
      lines[i], detail::kRoomFields, static_cast<int>(i) + 1);
  if (detail::normalize_key(header_label) != "room") {
    throw MalformedLine(static_cast<int>(i) + 1,
                        "scene file must start with a 'room' header");
  }
  out.room = Room(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                  static_cast<int>(dims[2]));

  std::string body;
  for (std::size_t k = i + 1; k < lines.size(); ++k) {
    body += lines[k];
    body += '\n';
  }

  bool looks_3d = false;
  for (std::size_t k = i + 1; k < lines.size(); ++k) {
    std::string_view line = detail::trim(lines[k]);
    if (line.empty()) continue;
    std::size_t brace = line.find('{');
    looks_3d = brace != std::string_view::npos &&
               line.substr(brace).find("height") != std::string_view::npos;
    break;
  }

  if (looks_3d) {
    Scene3D scene;
    scene.room = out.room;
    scene.objects = parse_scene3d_lines(body);
    out.scene3d = std::move(scene);
  } else {
    out.bev = parse_bev_layout(body);
  }
  return out;
}

inline std::string serialize_room_header(const Room& room) {
  return "room {length: " + std::to_string(room.max_length) +
         "px; width: " + std::to_string(room.max_width) +
         "px; height: " + std::to_string(room.max_height) + "px;}";
}

inline std::string serialize_scene_file(const Scene3D& scene) {
  return serialize_room_header(scene.room) + "\n" + serialize_scene3d(scene);
}

inline std::string serialize_scene_file(const Room& room,
                                        const BevLayout& layout) {
  return serialize_room_header(room) + "\n" + serialize_bev_layout(layout);
}

/// Distinct normalized class -> instance count.
inline std::map<std::string, int> class_counts(const BevLayout& layout) {
  std::map<std::string, int> counts;
  for (const auto& o : layout.objects) {
    ++counts[detail::normalize_class(o.label)];
  }
  return counts;
}

}  // namespace layoutforge
