// layoutforge: layout synthesis, scoring and dataset tooling.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "layoutforge/gateway_http.hpp"
#include "layoutforge/runner.hpp"

namespace lf = layoutforge;
namespace run = layoutforge::runner;

namespace {

struct GlobalFlags {
  std::optional<std::string> config_path;
  int seed = 0;
  int parallel = 4;
};

lf::BackendMode parse_mode(const std::string& mode) {
  auto parsed = lf::backend_mode_from_name(mode);
  if (!parsed) throw CLI::ValidationError("--mode must be live|replay|record");
  return *parsed;
}

std::shared_ptr<lf::Transport> transport_for(lf::BackendMode mode,
                                             const run::AppConfig& config) {
  if (mode == lf::BackendMode::replay) return nullptr;
  return lf::make_http_transport(config.gateway);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layout synthesis engine: generate, score, refine and package "
               "3D indoor scene layouts"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path,
                 "config file (default: ./layoutforge.config if present)");
  app.add_option("--seed", flags.seed, "base RNG seed for generator calls");
  app.add_option("--parallel", flags.parallel,
                 "bound on cross-scene concurrency");

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate",
                                      "parse a layout/scene file and run the "
                                      "invariants");
  validate->add_option("file", validate_path, "layout or scene file")
      ->required();

  // render
  run::RenderOptions render_options;
  std::string render_out;
  std::optional<std::string> render_room;
  int render_scale = 4;
  auto* render = app.add_subcommand("render", "rasterize a layout to PNG");
  render->add_option("file", render_options.scene_path, "scene file")
      ->required();
  render->add_option("--out", render_out, "output PNG path");
  render->add_option("--room", render_room, "room LxWxH for bare BEV files");
  render->add_option("--scale", render_scale, "device pixels per layout px");

  // metrics
  std::string metrics_path;
  double metrics_eps = 1.0, metrics_tol = 0.5;
  auto* metrics = app.add_subcommand("metrics",
                                     "out-of-bound and collision rates");
  metrics->add_option("scene", metrics_path, "3D scene file")->required();
  metrics->add_option("--eps", metrics_eps, "collision epsilon in px");
  metrics->add_option("--tol", metrics_tol, "out-of-bound tolerance in px");

  // score
  run::ScoreOptions score_options;
  std::string score_mode = "replay";
  auto* score = app.add_subcommand("score",
                                   "run both evaluators on a scene");
  score->add_option("scene", score_options.scene_path, "scene file")
      ->required();
  score->add_option("--description", score_options.description,
                    "scene description shown to the evaluators");
  score->add_option("--cot", score_options.cot_path, "CoT record JSON");
  score->add_option("--cassette", score_options.cassette_path,
                    "cassette path");
  score->add_option("--mode", score_mode, "live|replay|record");

  // reward
  std::string reward_batch_dir;
  std::optional<std::string> reward_out;
  auto* reward = app.add_subcommand("reward",
                                    "entropy-weighted reward report for a "
                                    "sample batch");
  reward->add_option("batch", reward_batch_dir,
                     "batch directory (with batch.json) or batch file")
      ->required();
  reward->add_option("--out", reward_out, "write the report JSON here");

  // pairs
  run::PairsOptions pairs_options;
  auto* pairs = app.add_subcommand("pairs",
                                   "build DPO preference pairs from a batch");
  pairs->add_option("batch", pairs_options.batch_dir,
                    "batch directory (with batch.json) or batch file")
      ->required();
  pairs->add_option("--threshold", pairs_options.threshold,
                    "minimum reward difference");
  pairs->add_option("--max-pairs-per-prompt",
                    pairs_options.max_pairs_per_prompt,
                    "keep only the widest-gap pairs");
  pairs->add_option("--out", pairs_options.out_path, "output .dpo.jsonl path");

  // sft-build
  run::SftBuildOptions sft_options;
  std::string sft_mode = "replay";
  auto* sft = app.add_subcommand("sft-build",
                                 "CoT SFT records from ground-truth scenes");
  sft->add_option("gt-dir", sft_options.gt_dir,
                  "directory of ground-truth *.scene files")
      ->required();
  sft->add_option("--cassette", sft_options.cassette_path, "cassette path");
  sft->add_option("--mode", sft_mode, "live|replay|record");
  sft->add_option("--out", sft_options.out_path, "output .sft.jsonl path");
  sft->add_option("--report", sft_options.report_path,
                  "per-record status report path");

  // describe
  run::DescribeOptions describe_options;
  std::string describe_mode = "replay";
  std::string quota_spec = "2:2:1";
  auto* describe = app.add_subcommand("describe",
                                      "generate scene descriptions at three "
                                      "granularities");
  describe->add_option("--scene-types", describe_options.quota.num_scene_types,
                       "number of scene categories");
  describe->add_option("--quotas", quota_spec,
                       "coarse:medium:fine per scene type");
  describe->add_option("--cassette", describe_options.cassette_path,
                       "cassette path");
  describe->add_option("--mode", describe_mode, "live|replay|record");
  describe->add_option("--out", describe_options.out_path, "output JSON path");

  // generate
  run::GenerateOptions generate_options;
  std::string generate_mode = "replay";
  std::string generate_room = "256x256x160";
  auto* generate = app.add_subcommand("generate",
                                      "full pipeline: BEV, lift, align, "
                                      "assemble");
  generate->add_option("prompt", generate_options.description,
                       "scene description")
      ->required();
  generate->add_option("--room", generate_room, "room LxWxH");
  generate->add_option("--mode", generate_mode, "live|replay|record");
  generate->add_option("--cassette", generate_options.cassette_path,
                       "cassette path");
  generate->add_option("--out-dir", generate_options.out_dir,
                       "output directory");
  generate->add_option("--scene-id", generate_options.scene_id,
                       "basename for output files");
  generate->add_option("--max-iters", generate_options.max_iters,
                       "alignment iteration cap");
  generate->add_option("--assets", generate_options.assets_path,
                       "asset record JSON list");

  // align
  run::AlignOptions align_options;
  std::string align_mode = "replay";
  auto* align = app.add_subcommand("align",
                                   "run the alignment loop on an existing "
                                   "scene");
  align->add_option("scene", align_options.scene_path, "3D scene file")
      ->required();
  align->add_option("--description", align_options.description,
                    "scene description");
  align->add_option("--cot", align_options.cot_path, "CoT record JSON");
  align->add_option("--cassette", align_options.cassette_path,
                    "cassette path");
  align->add_option("--mode", align_mode, "live|replay|record");
  align->add_option("--out-dir", align_options.out_dir, "output directory");
  align->add_option("--scene-id", align_options.scene_id,
                    "basename for output files");
  align->add_option("--max-iters", align_options.max_iters,
                    "alignment iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    run::AppConfig config = run::resolve_app_config(flags.config_path);

    if (*validate) {
      auto summary = run::run_validate(validate_path);
      std::cout << summary.to_json().dump(2) << "\n";
      return 0;
    }
    if (*render) {
      render_options.room_spec = render_room;
      render_options.raster = config.pipeline.raster;
      render_options.raster.scale = render_scale;
      if (render_out.empty()) {
        render_out = render_options.scene_path + ".bev.png";
      }
      render_options.out_path = render_out;
      run::run_render(render_options);
      std::cout << render_out << "\n";
      return 0;
    }
    if (*metrics) {
      auto report = run::run_metrics(metrics_path, metrics_eps, metrics_tol);
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }
    if (*score) {
      score_options.mode = parse_mode(score_mode);
      score_options.seed = flags.seed;
      score_options.transport = transport_for(score_options.mode, config);
      std::cout << run::run_score(score_options, config).dump(2) << "\n";
      return 0;
    }
    if (*reward) {
      auto report = run::run_reward(reward_batch_dir);
      std::string payload = report.to_json().dump(2) + "\n";
      if (reward_out) run::write_file(*reward_out, payload);
      std::cout << payload;
      return 0;
    }
    if (*pairs) {
      if (!pairs_options.out_path) {
        pairs_options.out_path = "pairs.dpo.jsonl";
      }
      auto result = run::run_pairs(pairs_options);
      std::cout << result.size() << " pairs -> " << *pairs_options.out_path
                << "\n";
      return 0;
    }
    if (*sft) {
      sft_options.mode = parse_mode(sft_mode);
      sft_options.seed = flags.seed;
      sft_options.parallel = flags.parallel;
      sft_options.transport = transport_for(sft_options.mode, config);
      auto report = run::run_sft_build(sft_options, config);
      std::size_t accepted = report.records.size();
      std::cout << accepted << "/" << report.items.size()
                << " records accepted -> " << sft_options.out_path << "\n";
      return 0;
    }
    if (*describe) {
      int coarse = 2, medium = 2, fine = 1;
      if (std::sscanf(quota_spec.c_str(), "%d:%d:%d", &coarse, &medium,
                      &fine) != 3) {
        std::cerr << "--quotas must be coarse:medium:fine\n";
        return 2;
      }
      describe_options.quota.coarse_per_type = coarse;
      describe_options.quota.medium_per_type = medium;
      describe_options.quota.fine_per_type = fine;
      describe_options.mode = parse_mode(describe_mode);
      describe_options.seed = flags.seed;
      describe_options.transport = transport_for(describe_options.mode,
                                                 config);
      auto records = run::run_describe(describe_options, config);
      std::cout << records.size() << " descriptions -> "
                << describe_options.out_path << "\n";
      return 0;
    }
    if (*generate) {
      generate_options.room = run::parse_room_spec(generate_room);
      generate_options.mode = parse_mode(generate_mode);
      generate_options.seed = flags.seed;
      generate_options.transport = transport_for(generate_options.mode,
                                                 config);
      auto outcome = run::run_generate(generate_options, config);
      std::cout << outcome.report.to_text();
      return outcome.exit_code;
    }
    if (*align) {
      align_options.mode = parse_mode(align_mode);
      align_options.seed = flags.seed;
      align_options.transport = transport_for(align_options.mode, config);
      auto outcome = run::run_align(align_options, config);
      std::cout << outcome.report.to_text();
      return outcome.exit_code;
    }
  } catch (const lf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
