#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "layoutforge/runner.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;
using layoutforge::json;

namespace {

const std::string kCli = LAYOUTFORGE_CLI_PATH;
const std::string kLaundryPrompt =
    "A laundry room with a washing machine, a dryer, and a laundry basket.";

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

// Runs the binary with stdout+stderr captured to a file.
CommandResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() /
                 ("lf_cli_out_" + std::to_string(counter++) + ".txt");
  std::string cmd = kCli + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (fs::exists(out)) {
    result.output = lftest::read_file(out);
    fs::remove(out);
  }
  return result;
}

std::string fixtures() { return lftest::fixture_dir().string(); }

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("lf_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("unknown subcommands exit with the usage code") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("validate parses good files and fails loudly on bad ones") {
  auto good =
      run_cli("validate " + fixtures() + "/corpus/layout_00.bev");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("\"objects\"") != std::string::npos);

  auto scene = run_cli("validate " + fixtures() + "/scenes/three_obj.scene");
  CHECK(scene.exit_code == 0);
  CHECK(scene.output.find("scene3d") != std::string::npos);

  fs::path bad = temp_dir("validate") / "bad.bev";
  layoutforge::runner::write_file(bad, "desk {length: 60px width: 30px;}\n");
  auto failed = run_cli("validate " + bad.string());
  CHECK(failed.exit_code == 1);
  CHECK(failed.output.find("line 1") != std::string::npos);
}

TEST_CASE("metrics prints the fixture rates") {
  auto result = run_cli("metrics " + fixtures() + "/scenes/three_obj.scene");
  CHECK(result.exit_code == 0);
  json j = json::parse(result.output);
  CHECK(j["collision_rate"].get<double>() == 2.0 / 3.0);

  auto oob = run_cli("metrics " + fixtures() +
                     "/scenes/four_obj.scene --eps 1.0 --tol 0.5");
  json j2 = json::parse(oob.output);
  CHECK(j2["out_of_bound_rate"].get<double>() == 0.25);
}

TEST_CASE("render writes a PNG for scene files") {
  fs::path dir = temp_dir("render");
  fs::path out = dir / "three.bev.png";
  auto result = run_cli("render " + fixtures() +
                        "/scenes/three_obj.scene --out " + out.string());
  CHECK(result.exit_code == 0);
  REQUIRE(fs::exists(out));
  std::string png = lftest::read_file(out);
  CHECK(png.substr(1, 3) == "PNG");
}

TEST_CASE("generate replays byte-identically from the committed cassette") {
  fs::path dir1 = temp_dir("gen1");
  fs::path dir2 = temp_dir("gen2");
  std::string base = "generate \"" + kLaundryPrompt +
                     "\" --room 256x171x160 --mode replay --cassette " +
                     fixtures() + "/cassettes/e2e.cassette --out-dir ";
  auto r1 = run_cli(base + dir1.string());
  auto r2 = run_cli(base + dir2.string());
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  for (const char* name : {"scene.manifest.json", "scene.bev.png",
                           "scene.scene", "run_report.json"}) {
    CHECK(lftest::read_file(dir1 / name) == lftest::read_file(dir2 / name));
  }
  json report = json::parse(lftest::read_file(dir1 / "run_report.json"));
  CHECK(report["status"] == "ok");
}

TEST_CASE("generate fails at the lift stage on the mutated cassette") {
  fs::path dir = temp_dir("genmut");
  auto result = run_cli("generate \"" + kLaundryPrompt +
                        "\" --room 256x171x160 --mode replay --cassette " +
                        fixtures() + "/cassettes/e2e_mutated.cassette "
                        "--out-dir " + dir.string());
  CHECK(result.exit_code == 1);
  json report = json::parse(lftest::read_file(dir / "run_report.json"));
  CHECK(report["status"] == "failed");
  CHECK(report["failed_stage"] == "lift");
  CHECK(report["error"].get<std::string>().find("footprint") !=
        std::string::npos);
}

TEST_CASE("generate without a cassette in replay mode is a stage failure") {
  fs::path dir = temp_dir("gennocas");
  auto result = run_cli("generate \"x\" --mode replay --out-dir " +
                        dir.string());
  CHECK(result.exit_code == 1);
}

TEST_CASE("score replays evaluator verdicts for a scene") {
  auto result = run_cli("score " + fixtures() +
                        "/scenes/three_obj.scene --description \"A storage "
                        "corner with a table, a box and a lamp.\" --cassette " +
                        fixtures() + "/cassettes/score.cassette");
  REQUIRE(result.exit_code == 0);
  json j = json::parse(result.output);
  CHECK(j["ratios"].size() == 7);
  CHECK(j["verdicts"].contains("table"));
  CHECK(j["errors"].empty());
  // storage box judged No on C2 by the fixture verdicts
  CHECK(j["ratios"][1].get<double>() == 2.0 / 3.0);
}

TEST_CASE("reward reports entropy weights for the fixture batch") {
  auto result = run_cli("reward " + fixtures() + "/batch");
  REQUIRE(result.exit_code == 0);
  json j = json::parse(result.output);
  REQUIRE(j["weights"].size() == 7);
  double sum = 0.0;
  for (const auto& w : j["weights"]) sum += w.get<double>();
  CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  CHECK(j["rewards"].size() == 3);
}

TEST_CASE("pairs builds a jsonl file that revalidates") {
  fs::path dir = temp_dir("pairs");
  fs::path out = dir / "out.dpo.jsonl";
  auto result = run_cli("pairs " + fixtures() +
                        "/batch --threshold 0.20 --out " + out.string());
  REQUIRE(result.exit_code == 0);
  REQUIRE(fs::exists(out));
  auto pairs = layoutforge::load_dpo_pairs(lftest::read_file(out));
  CHECK_FALSE(pairs.empty());
}

TEST_CASE("sft-build accepts the fixture scenes via the cassette") {
  fs::path dir = temp_dir("sft");
  auto result = run_cli("sft-build " + fixtures() + "/gt --cassette " +
                        fixtures() + "/cassettes/sft.cassette --out " +
                        (dir / "sft.jsonl").string() + " --report " +
                        (dir / "report.json").string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("2/2 records accepted") != std::string::npos);
  std::string jsonl = lftest::read_file(dir / "sft.jsonl");
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);
  json first = json::parse(jsonl.substr(0, jsonl.find('\n')));
  CHECK(first["version"] == 1);
  CHECK(first.contains("instruction"));
  CHECK(first.contains("output"));
}

TEST_CASE("describe writes the quota-checked corpus") {
  fs::path dir = temp_dir("describe");
  fs::path out = dir / "descriptions.json";
  auto result = run_cli("describe --scene-types 1 --quotas 2:2:1 --cassette " +
                        fixtures() + "/cassettes/describe.cassette --out " +
                        out.string());
  REQUIRE(result.exit_code == 0);
  json j = json::parse(lftest::read_file(out));
  CHECK(j.size() == 5);
  CHECK(j[0]["scene_type"] == "laundry room");
}

TEST_CASE("align converges instantly on the already-clean laundry scene") {
  fs::path dir = temp_dir("align");
  auto result = run_cli("align " + fixtures() + "/scenes/laundry.scene" +
                        " --description \"" + kLaundryPrompt +
                        "\" --max-iters 3 --cassette " + fixtures() +
                        "/cassettes/align.cassette --out-dir " + dir.string());
  REQUIRE(result.exit_code == 0);
  CHECK(fs::exists(dir / "scene.aligned.scene"));
  json report = json::parse(lftest::read_file(dir / "run_report.json"));
  CHECK(report["status"] == "ok");
  // converged at the first evaluation: the aligned scene equals the input
  CHECK(lftest::read_file(dir / "scene.aligned.scene") ==
        lftest::read_file(fixtures() + "/scenes/laundry.scene"));
}
