#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "layoutforge/layoutforge.hpp"

namespace layoutforge::runner {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write file: " + path.string());
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

/// "LxWxH" -> Room, e.g. "256x171x160".
inline Room parse_room_spec(const std::string& spec) {
  int dims[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = i < 2 ? spec.find('x', pos) : spec.size();
    if (next == std::string::npos) {
      throw Error("room spec must be LxWxH, got: " + spec);
    }
    auto v = detail::parse_real(spec.substr(pos, next - pos));
    if (!v || *v != static_cast<int>(*v)) {
      throw Error("room spec must use integers, got: " + spec);
    }
    dims[i] = static_cast<int>(*v);
    pos = next + 1;
  }
  return Room(dims[0], dims[1], dims[2]);
}

// ---- application config ----------------------------------------------------- //

struct AppConfig {
  GatewayConfig gateway;
  PipelineConfig pipeline;
};

inline AppConfig load_app_config(const json& j) {
  AppConfig cfg;
  if (j.contains("gateway")) cfg.gateway = load_gateway_config(j["gateway"]);
  if (j.contains("pipeline")) {
    const json& p = j["pipeline"];
    if (p.contains("base_seed")) {
      cfg.pipeline.base_seed = p["base_seed"].get<int>();
    }
    if (p.contains("max_generate_attempts")) {
      cfg.pipeline.max_generate_attempts =
          p["max_generate_attempts"].get<int>();
    }
    if (p.contains("max_iters")) {
      cfg.pipeline.max_iters = p["max_iters"].get<int>();
    }
    if (p.contains("collision_epsilon")) {
      cfg.pipeline.collision_epsilon = p["collision_epsilon"].get<double>();
    }
    if (p.contains("oob_tolerance")) {
      cfg.pipeline.oob_tolerance = p["oob_tolerance"].get<double>();
    }
  }
  if (j.contains("raster")) {
    const json& r = j["raster"];
    if (r.contains("scale")) cfg.pipeline.raster.scale = r["scale"].get<int>();
    if (r.contains("label_scale")) {
      cfg.pipeline.raster.label_scale = r["label_scale"].get<int>();
    }
    if (r.contains("fill_alpha")) {
      cfg.pipeline.raster.fill_alpha =
          static_cast<std::uint8_t>(r["fill_alpha"].get<int>());
    }
    if (r.contains("axis_arrows")) {
      cfg.pipeline.raster.axis_arrows = r["axis_arrows"].get<bool>();
    }
  }
  // decode params for pipeline calls come from the gateway role table
  for (const auto& [role, rc] : cfg.gateway.roles) {
    cfg.pipeline.decode[role] = rc.decode;
  }
  return cfg;
}

/// Search order: explicit --config path, ./layoutforge.config, defaults.
inline AppConfig resolve_app_config(const std::optional<std::string>& flag) {
  if (flag) return load_app_config(json::parse(read_file(*flag)));
  if (fs::exists("layoutforge.config")) {
    return load_app_config(json::parse(read_file("layoutforge.config")));
  }
  return AppConfig{};
}

// ---- run report --------------------------------------------------------------- //

/// Machine- and human-readable run summary. In replay mode stage timings are
/// reported as 0 so repeated runs produce byte-identical reports.
struct RunReport {
  struct Stage {
    std::string name;
    long long ms = 0;
    std::map<std::string, int> oracle_calls;
  };

  std::string status = "ok";  // "ok" | "failed"
  std::string failed_stage;
  std::string error;
  std::vector<Stage> stages;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;  // paths relative to the output directory

  json to_json() const {
    json stage_list = json::array();
    for (const auto& s : stages) {
      stage_list.push_back(json{{"name", s.name},
                                {"ms", s.ms},
                                {"oracle_calls", s.oracle_calls}});
    }
    return json{{"version", 1},        {"status", status},
                {"failed_stage", failed_stage}, {"error", error},
                {"stages", stage_list}, {"warnings", warnings},
                {"outputs", outputs}};
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "status: " << status << "\n";
    if (!failed_stage.empty()) out << "failed_stage: " << failed_stage << "\n";
    if (!error.empty()) out << "error: " << error << "\n";
    out << "stages:\n";
    for (const auto& s : stages) {
      out << "  " << s.name << " (" << s.ms << " ms)";
      if (!s.oracle_calls.empty()) {
        out << " calls:";
        for (const auto& [role, n] : s.oracle_calls) {
          out << " " << role << "=" << n;
        }
      }
      out << "\n";
    }
    out << "warnings:\n";
    for (const auto& w : warnings) out << "  " << w << "\n";
    out << "outputs:\n";
    for (const auto& o : outputs) out << "  " << o << "\n";
    return out.str();
  }
};

/// Tracks one stage: wall time plus the oracle-call delta it caused.
class StageTracker {
 public:
  StageTracker(RunReport& report, RunLog& log, std::string name,
               bool deterministic)
      : report_(report),
        log_(log),
        deterministic_(deterministic),
        start_(std::chrono::steady_clock::now()),
        calls_before_(log.oracle_calls) {
    stage_.name = std::move(name);
  }

  void finish() {
    if (finished_) return;
    finished_ = true;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    stage_.ms = deterministic_ ? 0 : elapsed;
    for (const auto& [role, n] : log_.oracle_calls) {
      int before = calls_before_.count(role) ? calls_before_.at(role) : 0;
      if (n - before > 0) stage_.oracle_calls[role] = n - before;
    }
    report_.stages.push_back(stage_);
  }

 private:
  RunReport& report_;
  RunLog& log_;
  bool deterministic_;
  RunReport::Stage stage_;
  std::chrono::steady_clock::time_point start_;
  std::map<std::string, int> calls_before_;
  bool finished_ = false;
};

// ---- oracle construction -------------------------------------------------------- //

struct OracleHandle {
  std::shared_ptr<Cassette> cassette;
  std::shared_ptr<Gateway> gateway;
  OracleFn fn;
};

inline OracleHandle make_oracle(BackendMode mode, const AppConfig& config,
                                const std::optional<std::string>& cassette_path,
                                std::shared_ptr<Transport> transport = nullptr) {
  OracleHandle handle;
  if (mode != BackendMode::live) {
    if (!cassette_path) {
      throw Error("replay/record mode needs --cassette <path>");
    }
    handle.cassette = std::make_shared<Cassette>(
        fs::exists(*cassette_path) ? cassette_load(*cassette_path)
                                   : Cassette{});
  }
  if (mode != BackendMode::replay && !transport) {
    throw Error("record/live mode needs an HTTP transport");
  }
  handle.gateway = std::make_shared<Gateway>(mode, config.gateway,
                                             handle.cassette, transport);
  handle.fn = [gateway = handle.gateway](const OracleRequest& req) {
    return gateway->complete(req);
  };
  return handle;
}

// ---- generate ---------------------------------------------------------------------- //

struct GenerateOptions {
  std::string description;
  Room room{256, 256, 160};
  BackendMode mode = BackendMode::replay;
  std::optional<std::string> cassette_path;
  std::string out_dir = ".";
  std::string scene_id = "scene";
  int seed = 0;
  int max_iters = 3;
  std::optional<std::string> assets_path;  // JSON list of asset records
  std::shared_ptr<Transport> transport;    // record/live only
};

inline std::vector<AssetRecord> load_assets(const fs::path& path) {
  json j = json::parse(read_file(path));
  if (!j.is_array()) throw Error("asset file must be a JSON list");
  std::vector<AssetRecord> assets;
  for (const json& entry : j) {
    AssetRecord a;
    a.asset_id = entry.value("asset_id", "asset_" + std::to_string(assets.size()));
    a.source_prompt = entry.value("source_prompt", "");
    if (entry.contains("native_extents")) {
      const json& e = entry["native_extents"];
      if (!e.is_array() || e.size() != 3) {
        throw Error("native_extents must be a 3-element list");
      }
      for (int k = 0; k < 3; ++k) a.native_extents[k] = e[k].get<double>();
    }
    a.front_axis = entry.value("front_axis", "+x");
    a.validate();
    assets.push_back(std::move(a));
  }
  return assets;
}

struct GenerateOutcome {
  RunReport report;
  std::optional<SceneManifest> manifest;
  int exit_code = 0;
};

/// Full inference path: BEV generation, 3D lifting, the alignment loop, and
/// scene assembly. Writes `<scene_id>.manifest.json`, `<scene_id>.bev.png`
/// and `run_report.json` under out_dir. Replay runs are byte-reproducible.
inline GenerateOutcome run_generate(const GenerateOptions& options,
                                    const AppConfig& app_config = {}) {
  GenerateOutcome outcome;
  RunReport& report = outcome.report;
  bool deterministic = options.mode == BackendMode::replay;

  AppConfig config = app_config;
  config.pipeline.base_seed = options.seed;
  config.pipeline.max_iters = options.max_iters;

  auto fail = [&](const std::string& stage, const std::string& why) {
    report.status = "failed";
    report.failed_stage = stage;
    report.error = why;
    outcome.exit_code = 1;
  };

  std::string current_stage = "setup";
  OracleHandle oracle;
  try {
    oracle = make_oracle(options.mode, config, options.cassette_path,
                         options.transport);
    PipelineContext ctx(oracle.fn, config.pipeline);

    current_stage = "generate_bev";
    StageTracker gen_stage(report, ctx.log, current_stage, deterministic);
    GenerateResult gen =
        generate_bev(ctx, options.description, options.room);
    gen_stage.finish();

    current_stage = "lift";
    StageTracker lift_stage(report, ctx.log, current_stage, deterministic);
    Scene3D scene =
        lift_to_3d(ctx, options.description, gen.layout, options.room);
    lift_stage.finish();

    current_stage = "align";
    StageTracker align_stage(report, ctx.log, current_stage, deterministic);
    std::vector<AssetRecord> assets =
        options.assets_path ? load_assets(*options.assets_path)
                            : placeholder_assets(scene);
    AlignmentResult aligned = run_alignment_loop(
        ctx, scene, gen.cot, options.description, assets, options.max_iters);
    align_stage.finish();
    if (aligned.aborted) {
      ctx.log.warn("alignment returned best-so-far scene: " +
                   aligned.abort_reason);
    }

    current_stage = "assemble";
    StageTracker assemble_stage(report, ctx.log, current_stage, deterministic);
    if (assets.size() != aligned.final_scene.objects.size()) {
      // object count changed during alignment; placeholder assets track it
      if (options.assets_path) {
        throw AssetCountMismatch(aligned.final_scene.objects.size(),
                                 assets.size());
      }
      assets = placeholder_assets(aligned.final_scene);
    }
    SceneManifest manifest = assemble_scene(aligned.final_scene, assets);
    assemble_stage.finish();

    current_stage = "write_outputs";
    StageTracker write_stage(report, ctx.log, current_stage, deterministic);
    fs::path out_dir(options.out_dir);
    std::string manifest_name = options.scene_id + ".manifest.json";
    std::string png_name = options.scene_id + ".bev.png";
    std::string scene_name = options.scene_id + ".scene";
    write_file(out_dir / manifest_name, manifest.to_json().dump(2) + "\n");
    write_file(out_dir / png_name,
               rasterize_bev(aligned.final_scene, config.pipeline.raster));
    write_file(out_dir / scene_name,
               serialize_scene_file(aligned.final_scene));
    write_stage.finish();

    report.warnings = ctx.log.warnings;
    report.outputs = {manifest_name, png_name, scene_name, "run_report.json"};
    outcome.manifest = std::move(manifest);
  } catch (const Error& e) {
    fail(current_stage, e.what());
  }

  // persist even after a failed stage so record sessions keep their traffic
  if (options.mode == BackendMode::record && oracle.cassette &&
      options.cassette_path) {
    cassette_persist(*oracle.cassette, *options.cassette_path);
  }
  write_file(fs::path(options.out_dir) / "run_report.json",
             report.to_json().dump(2) + "\n");
  return outcome;
}

// ---- align ------------------------------------------------------------------------- //

struct AlignOptions {
  std::string scene_path;
  std::string description;
  std::optional<std::string> cot_path;  // JSON with the five CoT fields
  BackendMode mode = BackendMode::replay;
  std::optional<std::string> cassette_path;
  std::string out_dir = ".";
  std::string scene_id = "scene";
  int seed = 0;
  int max_iters = 3;
  std::shared_ptr<Transport> transport;
};

struct AlignOutcome {
  RunReport report;
  std::optional<Scene3D> final_scene;
  int iterations = 0;
  int exit_code = 0;
};

inline AlignOutcome run_align(const AlignOptions& options,
                              const AppConfig& app_config = {}) {
  AlignOutcome outcome;
  RunReport& report = outcome.report;
  bool deterministic = options.mode == BackendMode::replay;

  AppConfig config = app_config;
  config.pipeline.base_seed = options.seed;

  try {
    Scene3D scene = parse_scene_file(read_file(options.scene_path)).require_3d();
    std::optional<CotRecord> cot;
    if (options.cot_path) {
      cot = parse_cot_record(json::parse(read_file(*options.cot_path)));
    }
    CotRecord cot_or_blank =
        cot.value_or(CotRecord{options.description, "(not provided)",
                               "(not provided)", "(not provided)",
                               serialize_bev_layout(scene.bev_projection())});

    OracleHandle oracle = make_oracle(options.mode, config,
                                      options.cassette_path,
                                      options.transport);
    PipelineContext ctx(oracle.fn, config.pipeline);

    StageTracker align_stage(report, ctx.log, "align", deterministic);
    AlignmentResult aligned = run_alignment_loop(
        ctx, scene, cot_or_blank, options.description,
        placeholder_assets(scene), options.max_iters);
    align_stage.finish();

    StageTracker write_stage(report, ctx.log, "write_outputs", deterministic);
    fs::path out_dir(options.out_dir);
    std::string scene_name = options.scene_id + ".aligned.scene";
    std::string png_name = options.scene_id + ".aligned.bev.png";
    write_file(out_dir / scene_name,
               serialize_scene_file(aligned.final_scene));
    write_file(out_dir / png_name,
               rasterize_bev(aligned.final_scene, config.pipeline.raster));
    write_stage.finish();

    if (aligned.aborted) {
      ctx.log.warn("alignment returned best-so-far scene: " +
                   aligned.abort_reason);
    }
    report.warnings = ctx.log.warnings;
    report.outputs = {scene_name, png_name, "run_report.json"};
    outcome.final_scene = std::move(aligned.final_scene);
    outcome.iterations = static_cast<int>(aligned.history.size());

    if (options.mode == BackendMode::record && oracle.cassette) {
      cassette_persist(*oracle.cassette, *options.cassette_path);
    }
  } catch (const Error& e) {
    report.status = "failed";
    report.failed_stage = "align";
    report.error = e.what();
    outcome.exit_code = 1;
  }

  write_file(fs::path(options.out_dir) / "run_report.json",
             report.to_json().dump(2) + "\n");
  return outcome;
}

// ---- offline subcommands -------------------------------------------------------------- //

struct ValidationSummary {
  std::string kind;  // "bev" | "scene3d"
  std::size_t objects = 0;
  std::vector<std::string> findings;

  json to_json() const {
    return json{
        {"kind", kind}, {"objects", objects}, {"findings", findings}};
  }
};

/// Parses a layout or scene file and runs the invariants. Files starting
/// with a `room {...}` header may carry BEV or 3D lines; bare files hold
/// BEV lines only.
inline ValidationSummary run_validate(const std::string& path) {
  std::string text = read_file(path);
  ValidationSummary summary;

  std::string_view head = detail::trim(text);
  bool has_room_header = head.substr(0, 4) == "room";
  if (has_room_header) {
    SceneFile scene_file = parse_scene_file(text);
    if (scene_file.scene3d) {
      summary.kind = "scene3d";
      summary.objects = scene_file.scene3d->objects.size();
      summary.findings = scene_file.scene3d->z_bound_findings();
    } else {
      summary.kind = "bev";
      summary.objects = scene_file.bev->objects.size();
    }
  } else {
    BevLayout layout = parse_bev_layout(text);
    summary.kind = "bev";
    summary.objects = layout.objects.size();
  }
  return summary;
}

inline MetricsReport run_metrics(const std::string& path, double epsilon,
                                 double tolerance) {
  Scene3D scene = parse_scene_file(read_file(path)).require_3d();
  return compute_metrics(scene, epsilon, tolerance);
}

struct RenderOptions {
  std::string scene_path;
  std::optional<std::string> room_spec;  // for bare BEV files
  std::string out_path;
  RasterConfig raster;
};

inline void run_render(const RenderOptions& options) {
  std::string text = read_file(options.scene_path);
  std::string png;
  if (detail::trim(text).substr(0, 4) == "room") {
    SceneFile scene_file = parse_scene_file(text);
    png = scene_file.scene3d
              ? rasterize_bev(*scene_file.scene3d, options.raster)
              : rasterize_bev(*scene_file.bev, scene_file.room,
                              options.raster);
  } else {
    if (!options.room_spec) {
      throw Error("bare BEV files need --room LxWxH");
    }
    png = rasterize_bev(parse_bev_layout(text),
                        parse_room_spec(*options.room_spec), options.raster);
  }
  write_file(options.out_path, png);
}

struct ScoreOptions {
  std::string scene_path;
  std::string description;
  std::optional<std::string> cot_path;
  BackendMode mode = BackendMode::replay;
  std::optional<std::string> cassette_path;
  int seed = 0;
  std::shared_ptr<Transport> transport;
};

/// Verdicts plus the 7-ratio vector for one scene.
inline json run_score(const ScoreOptions& options,
                      const AppConfig& app_config = {}) {
  AppConfig config = app_config;
  config.pipeline.base_seed = options.seed;

  std::string text = read_file(options.scene_path);
  SceneFile scene_file = parse_scene_file(text);
  std::optional<CotRecord> cot;
  if (options.cot_path) {
    cot = parse_cot_record(json::parse(read_file(*options.cot_path)));
  }

  OracleHandle oracle = make_oracle(options.mode, config,
                                    options.cassette_path, options.transport);
  PipelineContext ctx(oracle.fn, config.pipeline);

  EvaluationResult eval;
  if (scene_file.scene3d) {
    std::string png =
        rasterize_bev(*scene_file.scene3d, config.pipeline.raster);
    eval = evaluate_scene(ctx, *scene_file.scene3d, cot, options.description,
                          png, /*request_suggestions=*/false);
  } else {
    std::string png = rasterize_bev(*scene_file.bev, scene_file.room,
                                    config.pipeline.raster);
    eval = evaluate_bev_layout(ctx, *scene_file.bev, scene_file.room, cot,
                               options.description, png,
                               /*request_suggestions=*/false);
  }

  json verdicts = json::object();
  for (const auto& [klass, v] : eval.verdicts.classes) {
    json entry = json::object();
    if (v.spatial) {
      entry["spatial"] = {(*v.spatial)[0], (*v.spatial)[1], (*v.spatial)[2]};
    }
    if (v.quant) {
      entry["quant_c4_c5_c6_c7"] = {(*v.quant)[0], (*v.quant)[1],
                                    (*v.quant)[2], (*v.quant)[3]};
    }
    verdicts[klass] = entry;
  }
  if (options.mode == BackendMode::record && oracle.cassette) {
    cassette_persist(*oracle.cassette, *options.cassette_path);
  }
  return json{{"verdicts", verdicts},
              {"ratios", eval.ratios},
              {"errors", eval.errors},
              {"warnings", ctx.log.warnings}};
}

inline RewardReport run_reward(const std::string& batch_dir) {
  fs::path batch_path = fs::path(batch_dir) / "batch.json";
  if (!fs::exists(batch_path)) batch_path = batch_dir;  // allow a direct file
  SampleBatch batch =
      SampleBatch::from_json(json::parse(read_file(batch_path)));
  if (batch.samples.size() < 2) throw BatchTooSmall(batch.samples.size());
  return compute_reward_report(batch.ratio_matrix());
}

struct PairsOptions {
  std::string batch_dir;
  double threshold = 0.20;
  std::optional<std::size_t> max_pairs_per_prompt;
  std::optional<std::string> out_path;
};

inline std::vector<PreferencePair> run_pairs(const PairsOptions& options) {
  fs::path batch_path = fs::path(options.batch_dir) / "batch.json";
  if (!fs::exists(batch_path)) batch_path = options.batch_dir;
  SampleBatch batch =
      SampleBatch::from_json(json::parse(read_file(batch_path)));
  auto pairs = build_dpo_pairs(batch, options.threshold,
                               options.max_pairs_per_prompt);
  if (options.out_path) {
    write_file(*options.out_path,
               serialize_dpo_pairs(pairs, options.threshold));
  }
  return pairs;
}

struct SftBuildOptions {
  std::string gt_dir;
  BackendMode mode = BackendMode::replay;
  std::optional<std::string> cassette_path;
  std::string out_path = "sft.jsonl";
  std::string report_path = "sft_report.json";
  int seed = 0;
  int parallel = 1;
  std::shared_ptr<Transport> transport;
};

/// Builds CoT SFT records for every *.scene file under gt_dir (sorted by
/// name). Files are processed in parallel with per-file seed blocks so the
/// output does not depend on scheduling.
inline SftBatchReport run_sft_build(const SftBuildOptions& options,
                                    const AppConfig& app_config = {}) {
  AppConfig config = app_config;
  config.pipeline.base_seed = options.seed;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(options.gt_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scene") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error("no *.scene files under " + options.gt_dir);
  }

  OracleHandle oracle = make_oracle(options.mode, config,
                                    options.cassette_path, options.transport);

  constexpr int kSeedsPerFile = 16;
  auto run_one = [&](std::size_t index) -> SftBatchReport {
    PipelineContext ctx(oracle.fn, config.pipeline);
    ctx.seed_cursor =
        config.pipeline.base_seed + static_cast<int>(index) * kSeedsPerFile;
    SceneFile scene_file = parse_scene_file(read_file(files[index]));
    if (!scene_file.bev) {
      throw Error("ground-truth scenes must carry BEV lines: " +
                  files[index].string());
    }
    return build_cot_sft_batch(
        ctx, {{files[index].filename().string(), *scene_file.bev,
               scene_file.room}});
  };

  SftBatchReport merged;
  int stride = std::max(1, options.parallel);
  for (std::size_t start = 0; start < files.size();
       start += static_cast<std::size_t>(stride)) {
    std::size_t end =
        std::min(files.size(), start + static_cast<std::size_t>(stride));
    std::vector<std::future<SftBatchReport>> futures;
    for (std::size_t i = start; i < end; ++i) {
      futures.push_back(std::async(std::launch::async, [&run_one, i] {
        try {
          return run_one(i);
        } catch (const Error& e) {
          SftBatchReport report;
          report.items.push_back({"", false, e.what()});
          return report;
        }
      }));
    }
    for (std::size_t i = start; i < end; ++i) {
      SftBatchReport part = futures[i - start].get();
      for (auto& item : part.items) {
        if (item.source.empty()) item.source = files[i].filename().string();
        merged.items.push_back(std::move(item));
      }
      for (auto& rec : part.records) merged.records.push_back(std::move(rec));
    }
  }

  write_file(options.out_path, serialize_sft_records(merged));
  write_file(options.report_path, merged.to_json().dump(2) + "\n");
  if (options.mode == BackendMode::record && oracle.cassette) {
    cassette_persist(*oracle.cassette, *options.cassette_path);
  }
  return merged;
}

struct DescribeOptions {
  DescriptionQuota quota;
  BackendMode mode = BackendMode::replay;
  std::optional<std::string> cassette_path;
  std::string out_path = "descriptions.json";
  int seed = 0;
  std::shared_ptr<Transport> transport;
};

inline std::vector<DescriptionRecord> run_describe(
    const DescribeOptions& options, const AppConfig& app_config = {}) {
  AppConfig config = app_config;
  config.pipeline.base_seed = options.seed;
  OracleHandle oracle = make_oracle(options.mode, config,
                                    options.cassette_path, options.transport);
  PipelineContext ctx(oracle.fn, config.pipeline);
  auto records = generate_descriptions(ctx, options.quota);

  json out = json::array();
  for (const auto& r : records) out.push_back(r.to_json());
  write_file(options.out_path, out.dump(2) + "\n");
  if (options.mode == BackendMode::record && oracle.cassette) {
    cassette_persist(*oracle.cassette, *options.cassette_path);
  }
  return records;
}

}  // namespace layoutforge::runner
