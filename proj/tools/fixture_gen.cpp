// Regenerates the committed test fixtures: layout corpus, crafted scenes,
// prompt goldens, render goldens, a scored sample batch, ground-truth scenes
// and the replay cassettes. Run from the repo root:
//
//   ./build/tools/fixture_gen [fixtures-dir]
//
// Output is deterministic; re-running produces identical bytes.

#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "layoutforge/runner.hpp"

namespace lf = layoutforge;
namespace run = layoutforge::runner;
namespace fs = std::filesystem;
using lf::json;

namespace {

const std::string kLaundryPrompt =
    "A laundry room with a washing machine, a dryer, and a laundry basket.";

lf::BevLayout laundry_bev() {
  lf::BevLayout layout;
  layout.objects.emplace_back("washing machine", 40, 40, 30, 30, 0);
  layout.objects.emplace_back("dryer", 40, 40, 80, 30, 0);
  layout.objects.emplace_back("laundry basket", 20, 20, 130, 25, 0);
  return layout;
}

lf::Scene3D laundry_scene(const lf::Room& room) {
  lf::Scene3D scene;
  scene.room = room;
  scene.objects.emplace_back(
      "washing machine", 40, 40, 35, 30, 30, 17.5, 0,
      "A white front-loading washing machine with a round glass door.");
  scene.objects.emplace_back(
      "dryer", 40, 40, 35, 80, 30, 17.5, 0,
      "A white tumble dryer with a large circular door and dial controls.");
  scene.objects.emplace_back(
      "laundry basket", 20, 20, 25, 130, 25, 12.5, 0,
      "A woven wicker laundry basket with two side handles.");
  return scene;
}

std::string laundry_cot_response() {
  json response{
      {"prompt", kLaundryPrompt},
      {"response",
       {{"Entity Extraction",
         "The scene needs one washing machine, one dryer, and one laundry "
         "basket."},
        {"Order Decision",
         "Place the washing machine first, then the dryer beside it, and "
         "finally the laundry basket."},
        {"Spatial Reasoning",
         "The washing machine (40x40) sits near the left wall at (30, 30). "
         "The dryer (40x40) lines up next to it at (80, 30) so the pair "
         "shares a wall. The laundry basket (20x20) stays within reach at "
         "(130, 25)."},
        {"Answer Organization",
         lf::serialize_bev_layout(laundry_bev())}}}};
  return "```json\n" + response.dump(2) + "\n```";
}

std::string laundry_lift_response(bool mutate) {
  lf::Scene3D scene = laundry_scene(lf::Room(256, 171, 160));
  if (mutate) scene.objects[1].center_x += 5.0;
  json lines = json::array();
  for (const auto& o : scene.objects) {
    lines.push_back(lf::serialize_scene_object(o));
  }
  json prompts = json::array();
  for (const auto& o : scene.objects) prompts.push_back(o.asset_prompt);
  return json{{"3D_layout", lines}, {"object_prompts", prompts}}.dump(2);
}

std::string all_yes_spatial(bool with_suggestions) {
  json payload{{"washing machine", {"Yes", "Yes", "Yes"}},
               {"dryer", {"Yes", "Yes", "Yes"}},
               {"laundry basket", {"Yes", "Yes", "Yes"}}};
  if (with_suggestions) payload["suggestions"] = json::array();
  return payload.dump(2);
}

std::string all_yes_quant(bool with_suggestions) {
  json payload{{"washing machine", {"Yes", "Yes", "Yes", "Yes"}},
               {"dryer", {"Yes", "Yes", "Yes", "Yes"}},
               {"laundry basket", {"Yes", "Yes", "Yes", "Yes"}},
               {"expected_counts",
                {{"washing machine", 1}, {"dryer", 1}, {"laundry basket", 1}}}};
  if (with_suggestions) payload["suggestions"] = json::array();
  return payload.dump(2);
}

/// Answers chat requests by keying on distinctive phrases in the prompt.
class ScriptedTransport : public lf::Transport {
 public:
  using Responder = std::function<std::string(const std::string&)>;
  explicit ScriptedTransport(Responder responder)
      : responder_(std::move(responder)) {}

  lf::HttpResult post_json(
      const std::string&, const std::string&,
      const std::vector<std::pair<std::string, std::string>>&,
      const std::string& body) override {
    json req = json::parse(body);
    const json& content = req["messages"][0]["content"];
    std::string text;
    if (content.is_string()) {
      text = content.get<std::string>();
    } else {
      for (const json& part : content) {
        if (part.contains("text")) text += part["text"].get<std::string>();
      }
    }
    json resp{{"choices",
               json::array({json{
                   {"message", {{"content", responder_(text)}}}}})}};
    return {200, resp.dump(), ""};
  }

 private:
  Responder responder_;
};

std::string dispatch_prompt(const std::string& text, bool mutate_lift) {
  if (text.find("lifting a 2D layout to a 3D layout") != std::string::npos) {
    return laundry_lift_response(mutate_lift);
  }
  if (text.find("three judgments correspond") != std::string::npos) {
    return all_yes_spatial(text.find("suggestions") != std::string::npos);
  }
  if (text.find("four judgments correspond") != std::string::npos) {
    return all_yes_quant(text.find("suggestions") != std::string::npos);
  }
  if (text.find("plan a BEV layout") != std::string::npos) {
    return laundry_cot_response();
  }
  throw std::runtime_error("scripted transport: unrecognized prompt");
}

// ---- corpus ------------------------------------------------------------- //

void gen_corpus(const fs::path& dir) {
  std::mt19937 rng(42);
  const std::vector<std::string> labels = {
      "bed",          "nightstand",  "desk",        "office chair",
      "dining table", "sofa",        "bookshelf",   "floor lamp",
      "wardrobe",     "coffee table", "rug",        "potted plant",
      "tv stand",     "piano",       "treadmill",   "storage cabinet"};
  auto real = [&](double lo, double hi, int quanta) {
    std::uniform_int_distribution<int> d(0, quanta);
    return lo + (hi - lo) * d(rng) / quanta;
  };

  for (int f = 0; f < 50; ++f) {
    std::uniform_int_distribution<int> count_dist(1, 8);
    int n = count_dist(rng);
    lf::BevLayout layout;
    for (int i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> label_dist(0,
                                                            labels.size() - 1);
      double length = real(2, 120, f % 3 == 0 ? 240 : 118);
      double width = real(2, 120, f % 3 == 0 ? 240 : 118);
      double x = real(0, 256, 1024);
      double y = real(0, 256, 1024);
      double o = real(-360, 720, f % 2 == 0 ? 432 : 36);
      layout.objects.emplace_back(labels[label_dist(rng)], length, width, x,
                                  y, o);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "layout_%02d.bev", f);
    run::write_file(dir / name, lf::serialize_bev_layout(layout));
  }
}

// ---- crafted scenes ------------------------------------------------------- //

void gen_scenes(const fs::path& dir) {
  {
    // objects 0 and 1 interpenetrate; 2 is clear -> collision rate 2/3
    lf::Scene3D scene;
    scene.room = lf::Room(100, 100, 100);
    scene.objects.emplace_back("table", 40, 40, 40, 30, 30, 20, 0, "");
    scene.objects.emplace_back("storage box", 40, 40, 40, 40, 30, 20, 0, "");
    scene.objects.emplace_back("lamp", 10, 10, 20, 80, 80, 10, 0, "");
    run::write_file(dir / "three_obj.scene", lf::serialize_scene_file(scene));
  }
  {
    // one of four objects pokes past x = 0 -> out-of-bound rate 1/4
    lf::Scene3D scene;
    scene.room = lf::Room(256, 171, 160);
    scene.objects.emplace_back("cabinet", 10, 10, 30, 2, 50, 15, 0, "");
    scene.objects.emplace_back("desk", 60, 30, 30, 128, 40, 15, 0, "");
    scene.objects.emplace_back("chair", 20, 20, 35, 128, 90, 17.5, 0, "");
    scene.objects.emplace_back("shelf", 40, 15, 80, 200, 140, 40, 0, "");
    run::write_file(dir / "four_obj.scene", lf::serialize_scene_file(scene));
  }
  run::write_file(dir / "laundry.scene",
                  lf::serialize_scene_file(laundry_scene(lf::Room(256, 171,
                                                                  160))));
}

// ---- prompt goldens -------------------------------------------------------- //

void gen_prompt_goldens(const fs::path& dir) {
  std::string bev_text = lf::serialize_bev_layout(laundry_bev());
  std::string scene3d_text =
      lf::serialize_scene3d(laundry_scene(lf::Room(256, 171, 160)));

  std::map<std::string, std::map<std::string, std::string>> bindings = {
      {"cot_datagen",
       {{"max_length", "256"}, {"max_width", "171"}, {"bev_layout", bev_text}}},
      {"lifting",
       {{"max_length", "256"},
        {"max_width", "171"},
        {"max_height", "160"},
        {"text_description", kLaundryPrompt},
        {"bev_layout", bev_text}}},
      {"quant_eval",
       {{"scene_description", kLaundryPrompt},
        {"max_length", "256"},
        {"max_width", "171"},
        {"bev_layout", bev_text},
        {"metadata", "3D layout:\n" + scene3d_text}}},
      {"spatial_eval",
       {{"scene_description", kLaundryPrompt},
        {"max_length", "256"},
        {"max_width", "171"},
        {"bev_layout", bev_text},
        {"CoT", "(example chain of thought)"}}},
      {"description_gen",
       {{"num_scene_types", "1"},
        {"num_coarse_per_type", "2"},
        {"num_medium_per_type", "2"},
        {"num_fine_per_type", "1"}}},
      {"simple_reward",
       {{"scene_description", kLaundryPrompt},
        {"max_length", "256"},
        {"max_width", "171"},
        {"bev_layout", bev_text},
        {"CoT", "(example chain of thought)"}}},
      {"bev_generate",
       {{"description", kLaundryPrompt},
        {"max_length", "256"},
        {"max_width", "171"}}},
      {"alignment_feedback",
       {{"previous_layout", scene3d_text},
        {"feedback",
         "- object 0 (washing machine), size [C5]: reduce the footprint "
         "length=36\n"}}},
  };

  for (const auto& tpl : lf::prompt_templates()) {
    std::string name(tpl.name);
    run::write_file(dir / (name + ".golden.txt"),
                    lf::render_prompt(tpl.id, bindings.at(name)));
  }
}

// ---- render golden ----------------------------------------------------------- //

void gen_render_golden(const fs::path& dir) {
  lf::BevLayout layout;
  layout.objects.emplace_back("desk", 12, 6, 16, 12, 30);
  lf::RasterConfig cfg;
  cfg.scale = 2;
  cfg.label_scale = 1;
  run::write_file(dir / "one_box.png",
                  lf::rasterize_bev(layout, lf::Room(32, 24, 16), cfg));
}

// ---- sample batch ------------------------------------------------------------ //

lf::CotRecord toy_cot(const std::string& label, double size) {
  lf::BevObject obj(label, size, size, 50, 50, 0);
  lf::BevLayout layout;
  layout.objects.push_back(obj);
  lf::CotRecord cot;
  cot.prompt = "A room with a " + label + ".";
  cot.entity_extraction = "One " + label + ".";
  cot.order_decision = "Place the " + label + " first.";
  cot.spatial_reasoning = "The " + label + " sits at the room center.";
  cot.answer_organization = lf::serialize_bev_layout(layout);
  return cot;
}

void gen_batch(const fs::path& dir) {
  lf::SampleBatch batch;
  batch.prompt_id = "toy-batch";
  batch.description = "A compact home office with a desk.";
  batch.room = lf::Room(128, 128, 160);
  lf::BatchSample s0{toy_cot("desk", 60),
                     toy_cot("desk", 60).answer_layout(),
                     {1, 1, 1, 1, 1, 1, 1}};
  lf::BatchSample s1{toy_cot("desk", 50),
                     toy_cot("desk", 50).answer_layout(),
                     {1, 0, 1, 0.5, 1, 0, 1}};
  lf::BatchSample s2{toy_cot("desk", 40),
                     toy_cot("desk", 40).answer_layout(),
                     {0, 0, 1, 0.5, 0, 0, 1}};
  batch.samples = {s0, s1, s2};
  run::write_file(dir / "batch.json", batch.to_json().dump(2) + "\n");
}

// ---- ground-truth scenes ------------------------------------------------------- //

void gen_gt(const fs::path& dir) {
  {
    lf::BevLayout layout;
    layout.objects.emplace_back("bed", 88, 40, 120, 60, 0);
    layout.objects.emplace_back("nightstand", 16, 16, 60, 60, 0);
    layout.objects.emplace_back("nightstand", 16, 16, 180, 60, 0);
    run::write_file(dir / "bedroom_a.scene",
                    lf::serialize_scene_file(lf::Room(256, 171, 160), layout));
  }
  {
    lf::BevLayout layout;
    layout.objects.emplace_back("desk", 60, 30, 64, 30, 0);
    layout.objects.emplace_back("office chair", 20, 20, 64, 60, 180);
    run::write_file(dir / "office_b.scene",
                    lf::serialize_scene_file(lf::Room(128, 128, 160), layout));
  }
}

// ---- cassettes ------------------------------------------------------------------ //

void gen_cassettes(const fs::path& dir, const fs::path& fixtures) {
  fs::create_directories(dir);
  fs::path tmp = fs::temp_directory_path() / "layoutforge_fixture_gen";
  fs::create_directories(tmp);

  // e2e: full generate run that converges at the first evaluation
  {
    run::GenerateOptions options;
    options.description = kLaundryPrompt;
    options.room = lf::Room(256, 171, 160);
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "e2e.cassette").string();
    options.out_dir = (tmp / "e2e").string();
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string& text) { return dispatch_prompt(text, false); });
    fs::remove(dir / "e2e.cassette");
    auto outcome = run::run_generate(options);
    if (outcome.exit_code != 0) {
      throw std::runtime_error("e2e record run failed: " +
                               outcome.report.error);
    }
  }

  // e2e_mutated: the lifter keeps changing a footprint
  {
    run::GenerateOptions options;
    options.description = kLaundryPrompt;
    options.room = lf::Room(256, 171, 160);
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "e2e_mutated.cassette").string();
    options.out_dir = (tmp / "e2e_mutated").string();
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string& text) { return dispatch_prompt(text, true); });
    fs::remove(dir / "e2e_mutated.cassette");
    auto outcome = run::run_generate(options);
    if (outcome.exit_code == 0 || outcome.report.failed_stage != "lift") {
      throw std::runtime_error("mutated record run should fail at lift");
    }
  }

  // align: satisfied evaluators on the canned laundry scene
  {
    run::AlignOptions options;
    options.scene_path = (fixtures / "scenes" / "laundry.scene").string();
    options.description = kLaundryPrompt;
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "align.cassette").string();
    options.out_dir = (tmp / "align").string();
    options.max_iters = 3;
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string& text) { return dispatch_prompt(text, false); });
    fs::remove(dir / "align.cassette");
    auto outcome = run::run_align(options);
    if (outcome.exit_code != 0 || outcome.iterations != 0) {
      throw std::runtime_error("align record run should converge at once");
    }
  }

  // score: both evaluators on the three_obj fixture
  {
    run::ScoreOptions options;
    options.scene_path = (fixtures / "scenes" / "three_obj.scene").string();
    options.description = "A storage corner with a table, a box and a lamp.";
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "score.cassette").string();
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string& text) -> std::string {
          if (text.find("three judgments correspond") != std::string::npos) {
            return json{{"table", {"Yes", "Yes", "Yes"}},
                        {"storage box", {"Yes", "No", "Yes"}},
                        {"lamp", {"Yes", "Yes", "Yes"}}}
                .dump();
          }
          if (text.find("four judgments correspond") != std::string::npos) {
            return json{{"table", {"No", "Yes", "Yes", "Yes"}},
                        {"storage box", {"No", "Yes", "Yes", "Yes"}},
                        {"lamp", {"Yes", "Yes", "Yes", "Yes"}},
                        {"expected_counts",
                         {{"table", 1}, {"storage box", 1}, {"lamp", 1}}}}
                .dump();
          }
          throw std::runtime_error("unexpected prompt in score cassette");
        });
    fs::remove(dir / "score.cassette");
    run::run_score(options);
  }

  // sft: CoT annotations over the ground-truth scenes; the annotator echoes
  // the layout it is shown
  {
    run::SftBuildOptions options;
    options.gt_dir = (fixtures / "gt").string();
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "sft.cassette").string();
    options.out_path = (tmp / "sft.jsonl").string();
    options.report_path = (tmp / "sft_report.json").string();
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string& text) -> std::string {
          std::string marker = "BEV layout:\n";
          std::size_t pos = text.rfind(marker);
          if (pos == std::string::npos) {
            throw std::runtime_error("cot prompt without layout");
          }
          std::string layout_text = text.substr(pos + marker.size());
          json response{
              {"prompt", "A furnished room."},
              {"response",
               {{"Entity Extraction",
                 "The layout lists each object with its count."},
                {"Order Decision", "Large furniture first, then accents."},
                {"Spatial Reasoning",
                 "Each object keeps its given footprint and position."},
                {"Answer Organization", layout_text}}}};
          return response.dump(2);
        });
    fs::remove(dir / "sft.cassette");
    run::run_sft_build(options);
  }

  // describe: one scene type at the 2:2:1 quota
  {
    run::DescribeOptions options;
    options.quota.num_scene_types = 1;
    options.mode = lf::BackendMode::record;
    options.cassette_path = (dir / "describe.cassette").string();
    options.out_path = (tmp / "descriptions.json").string();
    options.transport = std::make_shared<ScriptedTransport>(
        [](const std::string&) -> std::string {
          auto rec = [](const char* granularity, const char* text, int len,
                        int wid, int hei) {
            return json{{"scene_type", "laundry room"},
                        {"granularity", granularity},
                        {"description", text},
                        {"room_size",
                         {{"length", len}, {"width", wid}, {"height", hei}}}};
          };
          return json::array(
                     {rec("coarse",
                          "A laundry room with a washing machine, dryer, "
                          "laundry basket, shelves, and detergent bottles.",
                          256, 171, 240),
                      rec("coarse",
                          "A laundry room with two machines and a drying "
                          "rack.",
                          200, 150, 220),
                      rec("medium",
                          "In a laundry room, the washer and dryer stand "
                          "against the back wall with a basket between them.",
                          220, 160, 230),
                      rec("medium",
                          "A laundry room where shelves line the left wall "
                          "and the machines face the door.",
                          210, 140, 210),
                      rec("fine-grained",
                          "A laundry room with the washer in the back-left "
                          "corner, the dryer immediately to its right, and a "
                          "wicker basket centered in front of both.",
                          256, 171, 240)})
              .dump(2);
        });
    fs::remove(dir / "describe.cassette");
    run::run_describe(options);
  }

  fs::remove_all(tmp);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path fixtures = argc > 1 ? argv[1] : "tests/fixtures";
  try {
    gen_corpus(fixtures / "corpus");
    gen_scenes(fixtures / "scenes");
    gen_prompt_goldens(fixtures / "prompts");
    gen_render_golden(fixtures / "render");
    gen_batch(fixtures / "batch");
    gen_gt(fixtures / "gt");
    gen_cassettes(fixtures / "cassettes", fixtures);
  } catch (const std::exception& e) {
    std::cerr << "fixture_gen failed: " << e.what() << "\n";
    return 1;
  }
  std::cout << "fixtures written under " << fixtures << "\n";
  return 0;
}
