#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "support/test_support.hpp"

using namespace layoutforge;
using lftest::QueueOracle;

namespace {

PipelineContext make_ctx(OracleFn fn, int base_seed = 0) {
  PipelineConfig cfg;
  cfg.base_seed = base_seed;
  cfg.raster.scale = 1;
  cfg.raster.label_scale = 1;
  return PipelineContext(std::move(fn), cfg);
}

json description_record(const char* granularity, int length = 200) {
  return json{{"scene_type", "laundry room"},
              {"granularity", granularity},
              {"description", "A laundry room."},
              {"room_size",
               {{"length", length}, {"width", 171}, {"height", 240}}}};
}

std::string five_record_response(int bad_length = 0) {
  json records = json::array({description_record("coarse"),
                              description_record("coarse"),
                              description_record("medium"),
                              description_record("medium"),
                              description_record("fine-grained")});
  if (bad_length > 0) records[0]["room_size"]["length"] = bad_length;
  return records.dump();
}

}  // namespace

TEST_CASE("generate_descriptions accepts a 2:2:1 batch") {
  QueueOracle oracle;
  oracle.responses = {five_record_response()};
  PipelineContext ctx = make_ctx(oracle.fn());
  DescriptionQuota quota;
  auto records = generate_descriptions(ctx, quota);
  REQUIRE(records.size() == 5);
  CHECK(records[0].scene_type == "laundry room");
  CHECK(records[4].granularity == Granularity::fine);
  CHECK(records[0].room.max_height == 240);
}

TEST_CASE("generate_descriptions rejects out-of-range rooms") {
  QueueOracle oracle;
  oracle.responses = {five_record_response(300)};
  PipelineContext ctx = make_ctx(oracle.fn());
  CHECK_THROWS_AS(generate_descriptions(ctx, DescriptionQuota{}),
                  RoomBoundViolation);
}

TEST_CASE("generate_descriptions enforces the granularity quota") {
  json records = json::array({description_record("coarse"),
                              description_record("coarse"),
                              description_record("coarse"),
                              description_record("medium"),
                              description_record("medium")});
  QueueOracle oracle;
  oracle.responses = {records.dump()};
  PipelineContext ctx = make_ctx(oracle.fn());
  try {
    generate_descriptions(ctx, DescriptionQuota{});
    FAIL("expected QuotaViolation");
  } catch (const QuotaViolation& e) {
    CHECK(e.scene_type() == "laundry room");
  }
}

TEST_CASE("generate_descriptions checks the scene-type count") {
  QueueOracle oracle;
  oracle.responses = {five_record_response()};
  PipelineContext ctx = make_ctx(oracle.fn());
  DescriptionQuota quota;
  quota.num_scene_types = 2;
  CHECK_THROWS_AS(generate_descriptions(ctx, quota), QuotaViolation);
}

namespace {

BevLayout bedroom_gt() {
  BevLayout layout;
  layout.objects.emplace_back("bed", 88, 40, 120, 60, 0);
  layout.objects.emplace_back("nightstand", 16, 16, 60, 60, 0);
  layout.objects.emplace_back("nightstand", 16, 16, 180, 60, 0);
  return layout;
}

std::string cot_echo_response(const BevLayout& layout) {
  return json{{"prompt", "A bedroom with a bed and two nightstands."},
              {"response",
               {{"Entity Extraction", "one bed, two nightstands"},
                {"Order Decision", "bed first"},
                {"Spatial Reasoning", "bed centered, nightstands flanking"},
                {"Answer Organization", serialize_bev_layout(layout)}}}}
      .dump();
}

}  // namespace

TEST_CASE("build_cot_sft_record accepts answers that echo the ground truth") {
  QueueOracle oracle;
  oracle.responses = {cot_echo_response(bedroom_gt())};
  PipelineContext ctx = make_ctx(oracle.fn());
  CotSftRecord record =
      build_cot_sft_record(ctx, bedroom_gt(), Room(256, 171, 160));
  CHECK(record.prompt == "A bedroom with a bed and two nightstands.");
  json sft = record.to_sft_json(Room(256, 171, 160));
  CHECK(sft["version"] == 1);
  CHECK(sft["instruction"] == record.prompt);
  CHECK(sft["input"].get<std::string>().find("256px") != std::string::npos);
}

TEST_CASE("build_cot_sft_record rejects dropped objects") {
  BevLayout truncated = bedroom_gt();
  truncated.objects.pop_back();
  QueueOracle oracle;
  oracle.responses = {cot_echo_response(truncated)};
  PipelineContext ctx = make_ctx(oracle.fn());
  CHECK_THROWS_AS(build_cot_sft_record(ctx, bedroom_gt(), Room(256, 171, 160)),
                  AnswerMismatch);
}

TEST_CASE("build_cot_sft_record tolerates sub-pixel numeric noise") {
  BevLayout noisy = bedroom_gt();
  noisy.objects[0].center_x += 0.25;  // rounds back to 120
  QueueOracle oracle;
  oracle.responses = {cot_echo_response(noisy)};
  PipelineContext ctx = make_ctx(oracle.fn());
  CHECK_NOTHROW(
      build_cot_sft_record(ctx, bedroom_gt(), Room(256, 171, 160)));
}

TEST_CASE("the sft batch reports per-record status") {
  BevLayout truncated = bedroom_gt();
  truncated.objects.pop_back();
  QueueOracle oracle;
  oracle.responses = {cot_echo_response(bedroom_gt()),
                      cot_echo_response(truncated)};
  PipelineContext ctx = make_ctx(oracle.fn());
  auto report = build_cot_sft_batch(
      ctx, {{"a.scene", bedroom_gt(), Room(256, 171, 160)},
            {"b.scene", bedroom_gt(), Room(256, 171, 160)}});
  REQUIRE(report.items.size() == 2);
  CHECK(report.items[0].accepted);
  CHECK_FALSE(report.items[1].accepted);
  CHECK(report.records.size() == 1);
  std::string jsonl = serialize_sft_records(report);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 1);
}

namespace {

// oracle for batch sampling: per-sample seed blocks decide which samples
// fail to parse
struct BatchOracle {
  std::set<int> broken_blocks;

  OracleFn fn() {
    return [this](const OracleRequest& req) -> std::string {
      int block = req.decode.seed / 16;
      if (req.model_role == ModelRole::bev_generator) {
        if (broken_blocks.count(block)) return "not json";
        BevLayout layout;
        layout.objects.emplace_back("desk", 60, 30, 100 + block, 40, 0);
        return json{{"prompt", "A study."},
                    {"response",
                     {{"Entity Extraction", "one desk"},
                      {"Order Decision", "desk"},
                      {"Spatial Reasoning", "desk centered"},
                      {"Answer Organization",
                       serialize_bev_layout(layout)}}}}
            .dump();
      }
      if (req.model_role == ModelRole::spatial_evaluator) {
        return json{{"desk", {"Yes", "Yes", "No"}}}.dump();
      }
      return json{{"desk", {"Yes", "No", "Yes", "Yes"}},
                  {"expected_counts", {{"desk", 1}}}}
          .dump();
    };
  }
};

}  // namespace

TEST_CASE("sample_layout_batch scores T samples into a ratio matrix") {
  BatchOracle oracle;
  PipelineContext ctx = make_ctx(oracle.fn());
  SampleBatch batch =
      sample_layout_batch(ctx, "p0", "A study.", Room(256, 171, 160), 3, 2);
  REQUIRE(batch.samples.size() == 3);
  CHECK(batch.failures.empty());
  for (const auto& s : batch.samples) {
    for (double r : s.ratios) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
    CHECK(s.ratios[0] == 1.0);  // C1 Yes
    CHECK(s.ratios[2] == 0.0);  // C3 No
    CHECK(s.ratios[6] == 1.0);  // counts match
  }
  // samples differ by seed block (distinct center_x)
  CHECK(batch.samples[0].layout.objects[0].center_x == 100);
  CHECK(batch.samples[1].layout.objects[0].center_x == 101);
  CHECK(batch.samples[2].layout.objects[0].center_x == 102);
}

TEST_CASE("sample_layout_batch records failed samples and keeps going") {
  BatchOracle oracle;
  oracle.broken_blocks = {1};
  PipelineContext ctx = make_ctx(oracle.fn());
  SampleBatch batch =
      sample_layout_batch(ctx, "p0", "A study.", Room(256, 171, 160), 3, 1);
  CHECK(batch.samples.size() == 2);
  REQUIRE(batch.failures.size() == 1);
  CHECK(batch.failures[0].find("sample 1") != std::string::npos);
}

TEST_CASE("sample_layout_batch enforces its preconditions") {
  BatchOracle oracle;
  PipelineContext ctx = make_ctx(oracle.fn());
  CHECK_THROWS_AS(
      sample_layout_batch(ctx, "p", "d", Room(256, 171, 160), 1, 1),
      BatchTooSmall);

  BatchOracle broken;
  broken.broken_blocks = {0, 1};
  PipelineContext ctx2 = make_ctx(broken.fn());
  CHECK_THROWS_AS(
      sample_layout_batch(ctx2, "p", "d", Room(256, 171, 160), 2, 1),
      BatchTooSmall);
}

TEST_CASE("pairing emits exactly the threshold-passing ordered pairs") {
  auto pairs = pair_indices_from_rewards({0.9, 0.6, 0.55}, 0.20);
  std::vector<std::pair<std::size_t, std::size_t>> want = {{0, 1}, {0, 2}};
  CHECK(pairs == want);

  CHECK(pair_indices_from_rewards({0.5, 0.5, 0.5}, 0.2).empty());

  auto all = pair_indices_from_rewards({0.3, 0.2, 0.1}, 0.0);
  CHECK(all.size() == 3);  // every strictly-ordered pair
}

TEST_CASE("pair counts match brute-force enumeration on random rewards") {
  std::mt19937 rng(515);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_dist(2, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = n_dist(rng);
    std::vector<double> rewards(n);
    for (double& r : rewards) r = unit(rng);
    double threshold = unit(rng) * 0.5;

    std::size_t brute = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && rewards[i] - rewards[j] > threshold) ++brute;
      }
    }
    REQUIRE(pair_indices_from_rewards(rewards, threshold).size() == brute);
  }
}

TEST_CASE("dpo pairs serialize, reload and revalidate") {
  SampleBatch batch = SampleBatch::from_json(
      json::parse(lftest::read_file(lftest::fixture_dir() / "batch" /
                                    "batch.json")));
  REQUIRE(batch.samples.size() == 3);

  auto pairs = build_dpo_pairs(batch, 0.20);
  REQUIRE_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    CHECK(p.reward_chosen - p.reward_rejected > 0.20);
    CHECK(p.prompt == batch.description);
    // chosen payload is the serialized four-step response
    CHECK(json::parse(p.chosen).contains("Answer Organization"));
  }

  std::string jsonl = serialize_dpo_pairs(pairs, 0.20);
  auto reloaded = load_dpo_pairs(jsonl);
  CHECK(reloaded.size() == pairs.size());

  // tampering with a reward makes the reload fail its recheck
  json line = json::parse(jsonl.substr(0, jsonl.find('\n')));
  line["reward_chosen"] = line["reward_rejected"];
  CHECK_THROWS_AS(load_dpo_pairs(line.dump() + "\n"), Error);
}

TEST_CASE("the per-prompt cap keeps the widest gaps") {
  SampleBatch batch = SampleBatch::from_json(
      json::parse(lftest::read_file(lftest::fixture_dir() / "batch" /
                                    "batch.json")));
  auto all = build_dpo_pairs(batch, 0.0);
  auto capped = build_dpo_pairs(batch, 0.0, 1);
  REQUIRE(capped.size() == 1);
  double widest = 0.0;
  for (const auto& p : all) {
    widest = std::max(widest, p.reward_chosen - p.reward_rejected);
  }
  CHECK(capped[0].reward_chosen - capped[0].reward_rejected == widest);
}

TEST_CASE("sample batches round-trip through JSON") {
  SampleBatch batch = SampleBatch::from_json(
      json::parse(lftest::read_file(lftest::fixture_dir() / "batch" /
                                    "batch.json")));
  SampleBatch round = SampleBatch::from_json(batch.to_json());
  CHECK(round.description == batch.description);
  REQUIRE(round.samples.size() == batch.samples.size());
  for (std::size_t i = 0; i < round.samples.size(); ++i) {
    CHECK(round.samples[i].ratios == batch.samples[i].ratios);
    CHECK(round.samples[i].cot == batch.samples[i].cot);
  }
}
