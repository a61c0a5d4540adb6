#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "layoutforge/errors.hpp"
#include "layoutforge/gateway.hpp"
#include "layoutforge/layout.hpp"
#include "layoutforge/prompts.hpp"
#include "layoutforge/render.hpp"
#include "layoutforge/reward.hpp"

namespace layoutforge {

/// Seam between the pipeline and model access. The CLI plugs in
/// Gateway::complete; tests plug in scripted fakes.
using OracleFn = std::function<std::string(const OracleRequest&)>;

/// Per-run diagnostics: warnings and oracle call counts by role.
struct RunLog {
  std::vector<std::string> warnings;
  std::map<std::string, int> oracle_calls;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  void count(ModelRole role) { ++oracle_calls[role_name(role)]; }
};

struct PipelineConfig {
  int base_seed = 0;
  int max_generate_attempts = 3;
  int max_iters = 3;
  double collision_epsilon = 1.0;
  double oob_tolerance = 0.5;
  RasterConfig raster;
  std::map<ModelRole, DecodeParams> decode;

  DecodeParams decode_for(ModelRole role) const {
    auto it = decode.find(role);
    return it == decode.end() ? DecodeParams{} : it->second;
  }
};

/// Shared state for one run. The seed cursor hands every generator call a
/// distinct seed so retries and refinement steps never replay each other's
/// cassette entries.
struct PipelineContext {
  OracleFn oracle;
  PipelineConfig config;
  RunLog log;
  int seed_cursor = 0;

  explicit PipelineContext(OracleFn oracle_fn, PipelineConfig cfg = {})
      : oracle(std::move(oracle_fn)),
        config(std::move(cfg)),
        seed_cursor(config.base_seed) {}

  std::string call(ModelRole role, std::string prompt,
                   std::string image_png = "",
                   std::optional<int> seed_override = std::nullopt) {
    OracleRequest req;
    req.model_role = role;
    req.prompt = std::move(prompt);
    req.image_png = std::move(image_png);
    req.decode = config.decode_for(role);
    if (seed_override) req.decode.seed = *seed_override;
    req.validate();
    log.count(role);
    return oracle(req);
  }

  int next_seed() { return seed_cursor++; }
};

namespace detail {

inline bool is_output_parse_failure(const Error& e) {
  return dynamic_cast<const NoStructureFound*>(&e) ||
         dynamic_cast<const UnbalancedStructure*>(&e) ||
         dynamic_cast<const MissingField*>(&e) ||
         dynamic_cast<const AnswerUnparseable*>(&e) ||
         dynamic_cast<const MalformedLine*>(&e) ||
         dynamic_cast<const EmptyLayout*>(&e) ||
         dynamic_cast<const InvalidObject*>(&e) ||
         dynamic_cast<const LengthMismatch*>(&e);
}

}  // namespace detail

// ---- BEV generation ------------------------------------------------------ //

struct GenerateResult {
  CotRecord cot;
  BevLayout layout;
  ConsistencyReport consistency;
};

/// Renders the generation prompt (plus optional feedback context from the
/// alignment loop), calls the BEV generator, and parses the four-step record.
/// Unparseable output is re-prompted with a fresh seed up to
/// max_generate_attempts times; transport and cassette errors propagate.
inline GenerateResult generate_bev(PipelineContext& ctx,
                                   const std::string& description,
                                   const Room& room,
                                   const std::string& feedback_context = "") {
  std::string prompt = render_prompt(
      TemplateId::bev_generate,
      {{"description", description},
       {"max_length", std::to_string(room.max_length)},
       {"max_width", std::to_string(room.max_width)}});
  if (!feedback_context.empty()) {
    prompt += "\n\n";
    prompt += feedback_context;
  }

  int attempts = ctx.config.max_generate_attempts;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::string response =
        ctx.call(ModelRole::bev_generator, prompt, "", ctx.next_seed());
    try {
      CotRecord cot = parse_cot_record(extract_json(response));
      GenerateResult result;
      result.layout = cot.answer_layout();
      result.consistency = check_cot_consistency(cot);
      result.cot = std::move(cot);
      for (const auto& f : result.consistency.findings) {
        using Kind = ConsistencyFinding::Kind;
        ctx.log.warn(
            f.kind == Kind::UnmentionedLabel
                ? "cot consistency: answer places \"" + f.label +
                      "\" never mentioned in entity extraction"
                : "cot consistency: \"" + f.label + "\" expected " +
                      std::to_string(f.expected) + ", answer has " +
                      std::to_string(f.got));
      }
      return result;
    } catch (const Error& e) {
      if (!detail::is_output_parse_failure(e)) throw;
      ctx.log.warn("generation attempt " + std::to_string(attempt) +
                   " unparseable: " + e.what());
    }
  }
  throw GenerationRejected(attempts);
}

// ---- 3D lifting ----------------------------------------------------------- //

namespace detail {

inline std::optional<std::size_t> first_mutated_index(
    const BevLayout& bev, const std::vector<SceneObject3D>& lifted) {
  for (std::size_t i = 0; i < bev.objects.size(); ++i) {
    const BevObject& a = bev.objects[i];
    const SceneObject3D& b = lifted[i];
    if (std::string(trim(a.label)) != std::string(trim(b.label)) ||
        a.length != b.length || a.width != b.width ||
        a.center_x != b.center_x || a.center_y != b.center_y ||
        a.orientation != b.orientation) {
      return i;
    }
  }
  return std::nullopt;
}

inline constexpr std::string_view kLiftCorrection =
    "Your previous answer changed fields that were given in the BEV layout. "
    "Copy label, length, width, center_x, center_y and orientation exactly "
    "as given; only height and center_z may be added.";

}  // namespace detail

/// Lifts a BEV layout to 3D via the layout lifter. The lifted objects must
/// preserve each BEV object's (label, length, width, center_x, center_y,
/// orientation) exactly; one corrective re-prompt is attempted before
/// FootprintMutated. z-intervals outside the room are logged, not fatal
/// (they surface as out-of-bound offenders in metrics).
inline Scene3D lift_to_3d(PipelineContext& ctx, const std::string& description,
                          const BevLayout& bev, const Room& room,
                          const std::string& feedback_context = "") {
  std::string prompt = render_prompt(
      TemplateId::lifting,
      {{"max_length", std::to_string(room.max_length)},
       {"max_width", std::to_string(room.max_width)},
       {"max_height", std::to_string(room.max_height)},
       {"text_description", description},
       {"bev_layout", serialize_bev_layout(bev)}});
  if (!feedback_context.empty()) {
    prompt += "\n\n";
    prompt += feedback_context;
  }

  std::optional<std::size_t> bad_index;
  for (int attempt = 1; attempt <= 2; ++attempt) {
    std::string attempt_prompt = prompt;
    if (attempt == 2) {
      attempt_prompt += "\n\n";
      attempt_prompt += detail::kLiftCorrection;
    }
    std::string response = ctx.call(ModelRole::layout_lifter, attempt_prompt,
                                    "", ctx.next_seed());
    std::vector<SceneObject3D> lifted = parse_scene3d(extract_json(response));
    if (lifted.size() != bev.objects.size()) {
      throw LengthMismatch(bev.objects.size(), lifted.size());
    }
    bad_index = detail::first_mutated_index(bev, lifted);
    if (!bad_index) {
      Scene3D scene{room, std::move(lifted)};
      for (const auto& finding : scene.z_bound_findings()) {
        ctx.log.warn("lift: " + finding);
      }
      return scene;
    }
    ctx.log.warn("lift attempt " + std::to_string(attempt) +
                 " mutated object " + std::to_string(*bad_index));
  }
  throw FootprintMutated(*bad_index);
}

// ---- evaluation ----------------------------------------------------------- //

enum class FeedbackAspect { position, size, orientation, height, count };

inline const char* aspect_name(FeedbackAspect a) {
  switch (a) {
    case FeedbackAspect::position: return "position";
    case FeedbackAspect::size: return "size";
    case FeedbackAspect::orientation: return "orientation";
    case FeedbackAspect::height: return "height";
    case FeedbackAspect::count: return "count";
  }
  return "unknown";
}

inline std::optional<FeedbackAspect> aspect_from_name(std::string_view s) {
  static const std::pair<const char*, FeedbackAspect> table[] = {
      {"position", FeedbackAspect::position},
      {"size", FeedbackAspect::size},
      {"orientation", FeedbackAspect::orientation},
      {"height", FeedbackAspect::height},
      {"count", FeedbackAspect::count}};
  for (const auto& [n, a] : table) {
    if (s == n) return a;
  }
  return std::nullopt;
}

/// Partial numeric record an evaluator proposes for one object.
struct ProposedValues {
  std::optional<double> length, width, height;
  std::optional<double> center_x, center_y, center_z;
  std::optional<double> orientation;

  bool any() const {
    return length || width || height || center_x || center_y || center_z ||
           orientation;
  }
};

struct FeedbackItem {
  std::size_t object_index = 0;
  std::string object_label;
  CriterionId criterion = CriterionId::C1_RelativeAlignment;
  FeedbackAspect aspect = FeedbackAspect::position;
  std::string instruction;
  ProposedValues proposed;
};

/// Object-specific revision suggestions assembled from criteria judged No.
struct Feedback {
  std::vector<FeedbackItem> items;

  bool empty() const { return items.empty(); }

  bool any_footprint_affecting() const {
    for (const auto& i : items) {
      if (i.aspect != FeedbackAspect::height) return true;
    }
    return false;
  }
  bool any_vertical() const {
    for (const auto& i : items) {
      if (i.aspect == FeedbackAspect::height) return true;
    }
    return false;
  }

  std::string to_context_text() const {
    std::string out;
    for (const auto& i : items) {
      out += "- object " + std::to_string(i.object_index) + " (" +
             i.object_label + "), " + aspect_name(i.aspect) + " [C" +
             std::to_string(static_cast<int>(i.criterion)) +
             "]: " + i.instruction;
      auto add = [&](const char* key, const std::optional<double>& v) {
        if (v) out += " " + std::string(key) + "=" + detail::format_real(*v);
      };
      add("length", i.proposed.length);
      add("width", i.proposed.width);
      add("height", i.proposed.height);
      add("center_x", i.proposed.center_x);
      add("center_y", i.proposed.center_y);
      add("center_z", i.proposed.center_z);
      add("orientation", i.proposed.orientation);
      out += '\n';
    }
    return out;
  }
};

struct EvaluationResult {
  VerdictMatrix verdicts;
  Feedback feedback;
  std::array<double, 7> ratios{};
  std::vector<std::string> errors;  // one entry per failed evaluator side
};

namespace detail {

inline std::optional<CriterionId> parse_criterion(const json& v) {
  if (v.is_number_integer()) {
    int n = v.get<int>();
    if (n >= 1 && n <= 7) return static_cast<CriterionId>(n);
    return std::nullopt;
  }
  if (v.is_string()) {
    std::string s = normalize_key(v.get<std::string>());
    if (s.size() == 2 && s[0] == 'c' && s[1] >= '1' && s[1] <= '7') {
      return static_cast<CriterionId>(s[1] - '0');
    }
  }
  return std::nullopt;
}

inline FeedbackAspect default_aspect(CriterionId c,
                                     const ProposedValues& proposed) {
  if (proposed.height || proposed.center_z) return FeedbackAspect::height;
  switch (c) {
    case CriterionId::C5_SizeProportion: return FeedbackAspect::size;
    case CriterionId::C6_OrientationValidity: return FeedbackAspect::orientation;
    case CriterionId::C7_QuantityAlignment: return FeedbackAspect::count;
    default: return FeedbackAspect::position;
  }
}

inline bool verdict_is_no(const VerdictMatrix& m, const std::string& klass,
                          CriterionId c) {
  auto it = m.classes.find(klass);
  if (it == m.classes.end()) return true;  // unjudged: keep the suggestion
  int k = static_cast<int>(c);
  if (k <= 3) {
    if (!it->second.spatial) return true;
    return !(*it->second.spatial)[k - 1];
  }
  if (!it->second.quant) return true;
  switch (c) {
    case CriterionId::C4_InterObjectDistance: return !(*it->second.quant)[0];
    case CriterionId::C5_SizeProportion: return !(*it->second.quant)[1];
    case CriterionId::C6_OrientationValidity: return !(*it->second.quant)[2];
    case CriterionId::C7_QuantityAlignment: return !(*it->second.quant)[3];
    default: return true;
  }
}

inline void collect_suggestions(const json& payload, const BevLayout& layout,
                                std::vector<FeedbackItem>& out,
                                RunLog& log) {
  const json* suggestions = find_key(payload, "suggestions");
  if (!suggestions || !suggestions->is_array()) return;

  for (const json& entry : *suggestions) {
    if (!entry.is_object()) continue;

    ProposedValues proposed;
    if (const json* p = find_key(entry, "proposed"); p && p->is_object()) {
      auto grab = [&](const char* key) -> std::optional<double> {
        const json* v = find_key(*p, key);
        if (v && v->is_number()) return v->get<double>();
        return std::nullopt;
      };
      proposed.length = grab("length");
      proposed.width = grab("width");
      proposed.height = grab("height");
      proposed.center_x = grab("center_x");
      proposed.center_y = grab("center_y");
      proposed.center_z = grab("center_z");
      proposed.orientation = grab("orientation");
    }

    const json* crit = find_key(entry, "criterion");
    auto criterion = crit ? parse_criterion(*crit) : std::nullopt;
    if (!criterion) {
      log.warn("suggestion dropped: missing or invalid criterion");
      continue;
    }

    FeedbackAspect aspect = default_aspect(*criterion, proposed);
    if (const json* a = find_key(entry, "aspect"); a && a->is_string()) {
      if (auto parsed = aspect_from_name(normalize_key(a->get<std::string>()))) {
        aspect = *parsed;
      }
    }

    std::string instruction;
    if (const json* ins = find_key(entry, "instruction");
        ins && ins->is_string()) {
      instruction = ins->get<std::string>();
    }

    std::vector<std::size_t> indices;
    const json* obj = find_key(entry, "object");
    if (obj && obj->is_number_integer()) {
      auto idx = obj->get<long long>();
      if (idx >= 0 && idx < static_cast<long long>(layout.objects.size())) {
        indices.push_back(static_cast<std::size_t>(idx));
      }
    } else if (obj && obj->is_string()) {
      std::string klass = normalize_class(obj->get<std::string>());
      for (std::size_t i = 0; i < layout.objects.size(); ++i) {
        if (normalize_class(layout.objects[i].label) == klass) {
          indices.push_back(i);
        }
      }
    }
    if (indices.empty()) {
      log.warn("suggestion dropped: no matching object");
      continue;
    }

    for (std::size_t idx : indices) {
      FeedbackItem item;
      item.object_index = idx;
      item.object_label = layout.objects[idx].label;
      item.criterion = *criterion;
      item.aspect = aspect;
      item.instruction = instruction;
      item.proposed = proposed;
      out.push_back(std::move(item));
    }
  }
}

}  // namespace detail

/// Runs both evaluators on a BEV layout. The spatial judge receives the
/// raster image; the quantitative judge receives `metadata_text` (3D lines,
/// asset bounds, or empty for pure-BEV scoring). A schema failure on one
/// side is recorded while the other side's verdicts are kept. Feedback keeps
/// only suggestions whose criterion was judged No.
inline EvaluationResult evaluate_bev_layout(PipelineContext& ctx,
                                            const BevLayout& bev,
                                            const Room& room,
                                            const std::optional<CotRecord>& cot,
                                            const std::string& description,
                                            const std::string& render_png,
                                            bool request_suggestions = false,
                                            const std::string& metadata_text = "") {
  std::string bev_text = serialize_bev_layout(bev);
  std::string cot_text =
      cot ? cot->steps_json().dump(2) : "(no chain of thought provided)";

  std::string spatial_prompt = render_prompt(
      TemplateId::spatial_eval,
      {{"scene_description", description},
       {"max_length", std::to_string(room.max_length)},
       {"max_width", std::to_string(room.max_width)},
       {"bev_layout", bev_text},
       {"CoT", cot_text}});
  std::string quant_prompt = render_prompt(
      TemplateId::quant_eval,
      {{"scene_description", description},
       {"max_length", std::to_string(room.max_length)},
       {"max_width", std::to_string(room.max_width)},
       {"bev_layout", bev_text},
       {"metadata", metadata_text}});
  if (request_suggestions) {
    spatial_prompt += prompt_bodies::kSuggestionRequest;
    quant_prompt += prompt_bodies::kSuggestionRequest;
  }

  EvaluationResult result;
  std::vector<FeedbackItem> raw_items;

  try {
    std::string response =
        ctx.call(ModelRole::spatial_evaluator, spatial_prompt, render_png);
    json payload = extract_json(response);
    result.verdicts.merge_from(parse_spatial_verdicts(payload, bev));
    detail::collect_suggestions(payload, bev, raw_items, ctx.log);
  } catch (const Error& e) {
    result.errors.push_back(std::string("spatial evaluator: ") + e.what());
  }
  try {
    std::string response = ctx.call(ModelRole::quant_evaluator, quant_prompt);
    json payload = extract_json(response);
    result.verdicts.merge_from(parse_quant_verdicts(payload, bev));
    detail::collect_suggestions(payload, bev, raw_items, ctx.log);
  } catch (const Error& e) {
    result.errors.push_back(std::string("quantitative evaluator: ") + e.what());
  }

  for (const auto& w : result.verdicts.warnings) ctx.log.warn(w);
  for (auto& item : raw_items) {
    std::string klass = detail::normalize_class(item.object_label);
    if (detail::verdict_is_no(result.verdicts, klass, item.criterion)) {
      result.feedback.items.push_back(std::move(item));
    }
  }
  result.ratios = ratio_vector(result.verdicts, bev);
  return result;
}

/// Scene-level wrapper: the quantitative judge gets the lifted 3D lines as
/// metadata so vertical stacking can be judged per criterion C4.
inline EvaluationResult evaluate_scene(PipelineContext& ctx,
                                       const Scene3D& scene,
                                       const std::optional<CotRecord>& cot,
                                       const std::string& description,
                                       const std::string& render_png,
                                       bool request_suggestions = true,
                                       const std::string& extra_metadata = "") {
  std::string metadata = "3D layout:\n" + serialize_scene3d(scene);
  if (!extra_metadata.empty()) {
    metadata += '\n';
    metadata += extra_metadata;
  }
  return evaluate_bev_layout(ctx, scene.bev_projection(), scene.room, cot,
                             description, render_png, request_suggestions,
                             metadata);
}

// ---- iterative asset-layout alignment ------------------------------------ //

/// Asset geometry as produced by an external object generator: the mesh's
/// axis-aligned bounds and which way it faces.
struct AssetRecord {
  std::string asset_id;
  std::string source_prompt;
  std::array<double, 3> native_extents{1.0, 1.0, 1.0};
  std::string front_axis = "+x";

  void validate() const {
    for (double e : native_extents) {
      if (!(e > 0.0)) {
        throw NonpositiveExtent("asset " + asset_id +
                                " has nonpositive native extent");
      }
    }
  }
};

struct AlignmentResult {
  Scene3D final_scene;
  CotRecord final_cot;
  std::vector<std::pair<Feedback, Scene3D>> history;
  int evaluations = 0;
  bool aborted = false;
  std::string abort_reason;
};

namespace detail {

inline std::string asset_metadata_text(const std::vector<AssetRecord>& assets) {
  if (assets.empty()) return "";
  std::string out = "Generated assets (id, native bounds x*y*z px):\n";
  for (const auto& a : assets) {
    out += "- " + a.asset_id + ": " + format_real(a.native_extents[0]) + "*" +
           format_real(a.native_extents[1]) + "*" +
           format_real(a.native_extents[2]) + ", front " + a.front_axis +
           ", \"" + a.source_prompt + "\"\n";
  }
  return out;
}

}  // namespace detail

/// Evaluate-feedback-update loop. Each iteration rasterizes the scene,
/// collects evaluator feedback, and stops as soon as no revisions are
/// proposed or max_iters updates have run. Footprint-affecting feedback
/// re-enters BEV generation; height-only feedback re-enters lifting.
/// Generation errors abort the loop and flag the best scene so far.
inline AlignmentResult run_alignment_loop(PipelineContext& ctx,
                                          const Scene3D& initial,
                                          const CotRecord& cot,
                                          const std::string& description,
                                          const std::vector<AssetRecord>& assets,
                                          int max_iters) {
  for (const auto& a : assets) a.validate();

  AlignmentResult result;
  result.final_scene = initial;
  result.final_cot = cot;
  std::string asset_metadata = detail::asset_metadata_text(assets);

  for (int t = 0;; ++t) {
    if (t >= max_iters) break;
    std::string png = rasterize_bev(result.final_scene, ctx.config.raster);
    EvaluationResult eval =
        evaluate_scene(ctx, result.final_scene, result.final_cot, description,
                       png, /*request_suggestions=*/true, asset_metadata);
    ++result.evaluations;
    for (const auto& e : eval.errors) ctx.log.warn("alignment: " + e);
    if (eval.feedback.empty()) break;

    std::string fb_block = render_prompt(
        TemplateId::alignment_feedback,
        {{"previous_layout", serialize_scene3d(result.final_scene)},
         {"feedback", eval.feedback.to_context_text()}});

    try {
      Scene3D updated;
      if (eval.feedback.any_footprint_affecting()) {
        GenerateResult regen = generate_bev(
            ctx, description, result.final_scene.room, fb_block);
        result.final_cot = regen.cot;
        updated = lift_to_3d(ctx, description, regen.layout,
                             result.final_scene.room,
                             eval.feedback.any_vertical() ? fb_block : "");
      } else {
        updated = lift_to_3d(ctx, description,
                             result.final_scene.bev_projection(),
                             result.final_scene.room, fb_block);
      }
      result.history.emplace_back(std::move(eval.feedback), updated);
      result.final_scene = std::move(updated);
    } catch (const Error& e) {
      result.aborted = true;
      result.abort_reason = e.what();
      ctx.log.warn(std::string("alignment aborted: ") + e.what());
      break;
    }
  }
  return result;
}

// ---- scene assembly -------------------------------------------------------- //

/// Placement of one generated asset: non-uniform scale from native bounds to
/// target extents, center translation, and yaw.
struct ManifestEntry {
  std::string asset_id;
  std::array<double, 3> scale{1.0, 1.0, 1.0};
  std::array<double, 3> translation{0.0, 0.0, 0.0};
  double yaw_degrees = 0.0;
  std::string asset_prompt;
};

struct SceneManifest {
  int version = 1;
  Room room;
  std::vector<ManifestEntry> objects;

  json to_json() const {
    json objs = json::array();
    for (const auto& o : objects) {
      objs.push_back(json{{"asset_id", o.asset_id},
                          {"scale", o.scale},
                          {"translation", o.translation},
                          {"yaw_degrees", o.yaw_degrees},
                          {"asset_prompt", o.asset_prompt}});
    }
    return json{{"version", version},
                {"room",
                 {{"max_length", room.max_length},
                  {"max_width", room.max_width},
                  {"max_height", room.max_height}}},
                {"objects", objs}};
  }
};

/// Matches assets to objects by index: scale = target extents / native
/// extents componentwise, translation = centers, yaw = orientation.
inline SceneManifest assemble_scene(const Scene3D& scene,
                                    const std::vector<AssetRecord>& assets) {
  if (assets.size() != scene.objects.size()) {
    throw AssetCountMismatch(scene.objects.size(), assets.size());
  }
  SceneManifest manifest;
  manifest.room = scene.room;
  manifest.objects.reserve(scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const SceneObject3D& o = scene.objects[i];
    const AssetRecord& a = assets[i];
    a.validate();
    ManifestEntry entry;
    entry.asset_id = a.asset_id;
    entry.scale = {o.length / a.native_extents[0],
                   o.width / a.native_extents[1],
                   o.height / a.native_extents[2]};
    entry.translation = {o.center_x, o.center_y, o.center_z};
    entry.yaw_degrees = o.orientation;
    entry.asset_prompt = o.asset_prompt;
    manifest.objects.push_back(std::move(entry));
  }
  return manifest;
}

/// Default stand-in assets (unit cubes) for runs without an asset generator.
inline std::vector<AssetRecord> placeholder_assets(const Scene3D& scene) {
  std::vector<AssetRecord> assets;
  assets.reserve(scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    AssetRecord a;
    a.asset_id = "asset_" + std::to_string(i);
    a.source_prompt = scene.objects[i].asset_prompt;
    a.native_extents = {1.0, 1.0, 1.0};
    assets.push_back(std::move(a));
  }
  return assets;
}

}  // namespace layoutforge
