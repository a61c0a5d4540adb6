#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "support/test_support.hpp"

using namespace layoutforge;
using lftest::fixture_dir;
using lftest::read_file;

TEST_CASE("parse_bev_layout handles the canonical desk line") {
  auto layout = parse_bev_layout(
      "desk {length: 60px; width: 30px; center_x: 128px; center_y: 40px; "
      "orientation: 90 degrees;}");
  REQUIRE(layout.objects.size() == 1);
  const auto& o = layout.objects[0];
  CHECK(o.label == "desk");
  CHECK(o.length == 60.0);
  CHECK(o.width == 30.0);
  CHECK(o.center_x == 128.0);
  CHECK(o.center_y == 40.0);
  CHECK(o.orientation == 90.0);
}

TEST_CASE("parse_bev_layout rejects degenerate inputs") {
  CHECK_THROWS_AS(parse_bev_layout(""), EmptyLayout);
  CHECK_THROWS_AS(parse_bev_layout("\n  \n\t\n"), EmptyLayout);

  try {
    parse_bev_layout("desk {length: 60px width: 30px;}");
    FAIL("expected MalformedLine");
  } catch (const MalformedLine& e) {
    CHECK(e.line_no() == 1);
  }
}

TEST_CASE("MalformedLine reports the physical line number") {
  std::string text =
      "\n"
      "desk {length: 60px; width: 30px; center_x: 1px; center_y: 1px; "
      "orientation: 0 degrees;}\n"
      "\n"
      "broken {length: 60px;}\n";
  try {
    parse_bev_layout(text);
    FAIL("expected MalformedLine");
  } catch (const MalformedLine& e) {
    CHECK(e.line_no() == 4);
  }
}

TEST_CASE("parser flags unknown keys, bad numbers and trailing garbage") {
  CHECK_THROWS_AS(parse_bev_layout("a {size: 60px; width: 30px; center_x: 1px; "
                                   "center_y: 1px; orientation: 0 degrees;}"),
                  MalformedLine);
  CHECK_THROWS_AS(parse_bev_layout("a {length: abcpx; width: 30px; center_x: "
                                   "1px; center_y: 1px; orientation: 0 "
                                   "degrees;}"),
                  MalformedLine);
  CHECK_THROWS_AS(parse_bev_layout("a {length: 60px; width: 30px; center_x: "
                                   "1px; center_y: 1px; orientation: 0 "
                                   "degrees;} extra"),
                  MalformedLine);
  // zero extents violate the object invariant
  CHECK_THROWS_AS(parse_bev_layout("a {length: 0px; width: 30px; center_x: "
                                   "1px; center_y: 1px; orientation: 0 "
                                   "degrees;}"),
                  MalformedLine);
  // labels cannot carry ';'
  CHECK_THROWS_AS(parse_bev_layout("a;b {length: 6px; width: 3px; center_x: "
                                   "1px; center_y: 1px; orientation: 0 "
                                   "degrees;}"),
                  MalformedLine);
}

TEST_CASE("whitespace around tokens is tolerated") {
  auto layout = parse_bev_layout(
      "  floor lamp   {  length :  6.5 px ;width: 3px;center_x: 1px; "
      "center_y: 1px;  orientation:  -90  degrees ; }  ");
  REQUIRE(layout.objects.size() == 1);
  CHECK(layout.objects[0].label == "floor lamp");
  CHECK(layout.objects[0].length == 6.5);
  CHECK(layout.objects[0].orientation == 270.0);
}

TEST_CASE("serialization is canonical and trims trailing zeros") {
  BevObject o("desk", 60, 30, 128, 40, 90);
  CHECK(serialize_bev_object(o) ==
        "desk {length: 60px; width: 30px; center_x: 128px; center_y: 40px; "
        "orientation: 90 degrees;}");
  BevObject frac("desk", 60, 30, 128, 40, 45.5);
  CHECK(serialize_bev_object(frac).find("orientation: 45.5 degrees;") !=
        std::string::npos);
}

TEST_CASE("negative orientations normalize to [0, 360) and serialize as such") {
  auto layout = parse_bev_layout(
      "a {length: 1px; width: 1px; center_x: 0px; center_y: 0px; "
      "orientation: -90 degrees;}");
  CHECK(layout.objects[0].orientation == 270.0);
  CHECK(serialize_bev_layout(layout).find("orientation: 270 degrees;") !=
        std::string::npos);
  CHECK(normalize_orientation(360.0) == 0.0);
  CHECK(normalize_orientation(-720.0) == 0.0);
  CHECK(normalize_orientation(725.5) == 5.5);
}

TEST_CASE("round-trip identity on random layouts") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    BevLayout layout = lftest::random_layout(rng);
    BevLayout round = parse_bev_layout(serialize_bev_layout(layout));
    REQUIRE(round == layout);
  }
}

TEST_CASE("round-trip identity on the fixture corpus") {
  int files = 0;
  for (const auto& entry :
       lftest::fs::directory_iterator(fixture_dir() / "corpus")) {
    if (entry.path().extension() != ".bev") continue;
    ++files;
    BevLayout layout = parse_bev_layout(read_file(entry.path()));
    CHECK(parse_bev_layout(serialize_bev_layout(layout)) == layout);
  }
  CHECK(files == 50);
}

TEST_CASE("parser never aborts on arbitrary byte input") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> len(0, 120);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> pick(0, 2);
  const std::string seedline =
      "desk {length: 60px; width: 30px; center_x: 128px; center_y: 40px; "
      "orientation: 90 degrees;}";

  for (int trial = 0; trial < 20000; ++trial) {
    std::string input;
    if (pick(rng) == 0) {
      int n = len(rng);
      for (int i = 0; i < n; ++i) {
        input += static_cast<char>(byte(rng));
      }
    } else {
      input = seedline;
      int edits = 1 + len(rng) % 8;
      for (int e = 0; e < edits && !input.empty(); ++e) {
        std::uniform_int_distribution<std::size_t> at(0, input.size() - 1);
        input[at(rng)] = static_cast<char>(byte(rng));
      }
    }
    try {
      parse_bev_layout(input);
    } catch (const MalformedLine&) {
    } catch (const EmptyLayout&) {
    }
  }
  SUCCEED("no aborts");
}

TEST_CASE("parse_scene3d reads the lifting payload") {
  json payload{
      {"3D_layout",
       {"bed {length: 88px; width: 40px; height: 36px; center_x: 120px; "
        "center_y: 60px; center_z: 18px; orientation: 0 degrees;}"}},
      {"object_prompts",
       {"A modern single bed with a rectangular frame and a wooden "
        "headboard."}}};
  auto objects = parse_scene3d(payload);
  REQUIRE(objects.size() == 1);
  CHECK(objects[0].label == "bed");
  CHECK(objects[0].height == 36.0);
  CHECK(objects[0].center_z == 18.0);
  CHECK(objects[0].asset_prompt ==
        "A modern single bed with a rectangular frame and a wooden "
        "headboard.");
}

TEST_CASE("parse_scene3d enforces parallel list lengths and 3D grammar") {
  json two_lines{
      {"3D_layout",
       {"a {length: 8px; width: 4px; height: 3px; center_x: 1px; center_y: "
        "1px; center_z: 2px; orientation: 0 degrees;}",
        "b {length: 8px; width: 4px; height: 3px; center_x: 9px; center_y: "
        "1px; center_z: 2px; orientation: 0 degrees;}"}},
      {"object_prompts", {"only one"}}};
  CHECK_THROWS_AS(parse_scene3d(two_lines), LengthMismatch);

  json missing_z{
      {"3D_layout",
       {"a {length: 8px; width: 4px; height: 3px; center_x: 1px; center_y: "
        "1px; orientation: 0 degrees;}"}},
      {"object_prompts", {"p"}}};
  CHECK_THROWS_AS(parse_scene3d(missing_z), MalformedLine);
}

TEST_CASE("serialize_scene3d round-trips and keeps prompts out of the lines") {
  Scene3D scene;
  scene.room = Room(256, 171, 160);
  scene.objects.emplace_back("bed", 88, 40, 36, 120, 60, 18, 0,
                             "A modern single bed.");
  std::string lines = serialize_scene3d(scene);
  CHECK(lines.find("A modern single bed.") == std::string::npos);
  auto parsed = parse_scene3d_lines(lines);
  REQUIRE(parsed.size() == 1);
  parsed[0].asset_prompt = scene.objects[0].asset_prompt;
  CHECK(parsed[0] == scene.objects[0]);

  Scene3D empty;
  empty.room = scene.room;
  CHECK_THROWS_AS(serialize_scene3d(empty), EmptyLayout);
}

TEST_CASE("scene files round-trip through the room header") {
  Scene3D scene;
  scene.room = Room(100, 80, 60);
  scene.objects.emplace_back("crate", 10, 10, 10, 20, 20, 5, 45, "");
  std::string text = serialize_scene_file(scene);
  SceneFile parsed = parse_scene_file(text);
  REQUIRE(parsed.scene3d.has_value());
  CHECK(parsed.room.max_length == 100);
  CHECK(*parsed.scene3d == scene);

  BevLayout bev;
  bev.objects.emplace_back("crate", 10, 10, 20, 20, 45);
  SceneFile parsed_bev =
      parse_scene_file(serialize_scene_file(Room(100, 80, 60), bev));
  REQUIRE(parsed_bev.bev.has_value());
  CHECK(*parsed_bev.bev == bev);
  CHECK_THROWS_AS(parsed_bev.require_3d(), Error);

  CHECK_THROWS_AS(parse_scene_file("crate {length: 1px; width: 1px; "
                                   "center_x: 0px; center_y: 0px; "
                                   "orientation: 0 degrees;}"),
                  MalformedLine);
}

TEST_CASE("parse_cot_record reads nested and flat payloads") {
  json nested{
      {"prompt", "A cozy bedroom."},
      {"response",
       {{"Entity Extraction", "one bed"},
        {"Order Decision", "bed first"},
        {"Spatial Reasoning", "center of the room"},
        {"Answer Organization",
         "bed {length: 88px; width: 40px; center_x: 120px; center_y: 60px; "
         "orientation: 0 degrees;}"}}}};
  CotRecord rec = parse_cot_record(nested);
  CHECK(rec.prompt == "A cozy bedroom.");
  CHECK(rec.order_decision == "bed first");
  CHECK(rec.answer_layout().objects.size() == 1);

  // flat shape, key variants, and the answer as a list of lines
  json flat{{"Prompt", "p"},
            {"entity_extraction", "one bed"},
            {"order decision", "bed first"},
            {"SPATIAL REASONING", "center"},
            {"answer_organization",
             json::array({"bed {length: 88px; width: 40px; center_x: 120px; "
                          "center_y: 60px; orientation: 0 degrees;}"})}};
  CotRecord rec2 = parse_cot_record(flat);
  CHECK(rec2.answer_layout().objects.size() == 1);
}

TEST_CASE("parse_cot_record reports missing fields and bad answers") {
  json missing{{"prompt", "p"},
               {"response",
                {{"Entity Extraction", "one bed"},
                 {"Spatial Reasoning", "center"},
                 {"Answer Organization", "bed {length: 8px; width: 4px; "
                                         "center_x: 1px; center_y: 1px; "
                                         "orientation: 0 degrees;}"}}}};
  try {
    parse_cot_record(missing);
    FAIL("expected MissingField");
  } catch (const MissingField& e) {
    CHECK(e.field() == "Order Decision");
  }

  json bad_answer{{"prompt", "p"},
                  {"response",
                   {{"Entity Extraction", "one bed"},
                    {"Order Decision", "bed"},
                    {"Spatial Reasoning", "center"},
                    {"Answer Organization", "no objects"}}}};
  CHECK_THROWS_AS(parse_cot_record(bad_answer), AnswerUnparseable);
}

TEST_CASE("cot consistency passes matched entities and counts") {
  BevLayout layout;
  layout.objects.emplace_back("bed", 88, 40, 120, 60, 0);
  layout.objects.emplace_back("nightstand", 16, 16, 60, 60, 0);
  layout.objects.emplace_back("nightstand", 16, 16, 180, 60, 0);
  CotRecord rec = lftest::make_cot(layout);
  rec.entity_extraction = "The room needs one bed, two nightstands.";
  CHECK(check_cot_consistency(rec).empty());
}

TEST_CASE("cot consistency flags unmentioned labels") {
  BevLayout layout;
  layout.objects.emplace_back("bed", 88, 40, 120, 60, 0);
  layout.objects.emplace_back("lamp", 8, 8, 40, 40, 0);
  CotRecord rec = lftest::make_cot(layout);
  rec.entity_extraction = "one bed";
  auto report = check_cot_consistency(rec);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].kind ==
        ConsistencyFinding::Kind::UnmentionedLabel);
  CHECK(report.findings[0].label == "lamp");
}

TEST_CASE("cot consistency flags count mismatches") {
  BevLayout layout;
  layout.objects.emplace_back("chair", 20, 20, 40, 40, 0);
  CotRecord rec = lftest::make_cot(layout);
  rec.entity_extraction = "two chairs";
  auto report = check_cot_consistency(rec);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].kind == ConsistencyFinding::Kind::CountMismatch);
  CHECK(report.findings[0].label == "chair");
  CHECK(report.findings[0].expected == 2);
  CHECK(report.findings[0].got == 1);
}

TEST_CASE("duplicate and multiword labels survive parsing") {
  std::string text =
      "office chair {length: 20px; width: 20px; center_x: 30px; center_y: "
      "30px; orientation: 0 degrees;}\n"
      "office chair {length: 20px; width: 20px; center_x: 70px; center_y: "
      "30px; orientation: 180 degrees;}\n";
  auto layout = parse_bev_layout(text);
  REQUIRE(layout.objects.size() == 2);
  CHECK(layout.objects[0].label == "office chair");
  CHECK(class_counts(layout).at("office chair") == 2);
}
