#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "layoutforge/errors.hpp"
#include "layoutforge/layout.hpp"
#include "layoutforge/pipeline.hpp"
#include "layoutforge/prompts.hpp"
#include "layoutforge/render.hpp"
#include "layoutforge/reward.hpp"

namespace layoutforge {

// ---- scene description corpus -------------------------------------------- //

enum class Granularity { coarse, medium, fine };

inline const char* granularity_name(Granularity g) {
  switch (g) {
    case Granularity::coarse: return "coarse";
    case Granularity::medium: return "medium";
    case Granularity::fine: return "fine";
  }
  return "unknown";
}

inline std::optional<Granularity> granularity_from_name(std::string_view s) {
  std::string n = detail::normalize_key(s);
  if (n == "coarse") return Granularity::coarse;
  if (n == "medium") return Granularity::medium;
  if (n == "fine" || n == "fine_grained" || n == "finegrained") {
    return Granularity::fine;
  }
  return std::nullopt;
}

struct DescriptionRecord {
  std::string scene_type;
  Granularity granularity = Granularity::coarse;
  std::string description;
  Room room;

  json to_json() const {
    return json{{"scene_type", scene_type},
                {"granularity", granularity_name(granularity)},
                {"description", description},
                {"room_size",
                 {{"length", room.max_length},
                  {"width", room.max_width},
                  {"height", room.max_height}}}};
  }
};

/// Per scene type: how many descriptions at each granularity. The default
/// 2:2:1 split matches the corpus recipe.
struct DescriptionQuota {
  int num_scene_types = 1;
  int coarse_per_type = 2;
  int medium_per_type = 2;
  int fine_per_type = 1;
};

/// Renders the description-generation prompt, calls the descriptor model,
/// and validates room bounds and the per-type granularity quota.
inline std::vector<DescriptionRecord> generate_descriptions(
    PipelineContext& ctx, const DescriptionQuota& quota) {
  if (quota.num_scene_types < 1 || quota.coarse_per_type < 0 ||
      quota.medium_per_type < 0 || quota.fine_per_type < 0 ||
      quota.coarse_per_type + quota.medium_per_type + quota.fine_per_type <
          1) {
    throw Error("description quota must be positive");
  }
  std::string prompt = render_prompt(
      TemplateId::description_gen,
      {{"num_scene_types", std::to_string(quota.num_scene_types)},
       {"num_coarse_per_type", std::to_string(quota.coarse_per_type)},
       {"num_medium_per_type", std::to_string(quota.medium_per_type)},
       {"num_fine_per_type", std::to_string(quota.fine_per_type)}});
  std::string response = ctx.call(ModelRole::descriptor, prompt);
  json payload = extract_json(response);
  if (!payload.is_array()) {
    throw SchemaError("description payload must be a JSON list");
  }

  std::vector<DescriptionRecord> records;
  std::map<std::string, std::array<int, 3>> per_type;
  for (const json& entry : payload) {
    DescriptionRecord rec;
    const json* scene_type = detail::find_key(entry, "scene_type");
    const json* granularity = detail::find_key(entry, "granularity");
    const json* description = detail::find_key(entry, "description");
    const json* room_size = detail::find_key(entry, "room_size");
    if (!scene_type || !granularity || !description || !room_size) {
      throw SchemaError("description record missing a required field");
    }
    rec.scene_type = scene_type->get<std::string>();
    auto g = granularity_from_name(granularity->get<std::string>());
    if (!g) {
      throw SchemaError("unknown granularity: " +
                        granularity->get<std::string>());
    }
    rec.granularity = *g;
    rec.description = description->get<std::string>();

    const json* len = detail::find_key(*room_size, "length");
    const json* wid = detail::find_key(*room_size, "width");
    const json* hei = detail::find_key(*room_size, "height");
    if (!len || !wid || !hei) {
      throw SchemaError("room_size needs length, width and height");
    }
    try {
      rec.room = Room(len->get<int>(), wid->get<int>(), hei->get<int>());
    } catch (const RoomBoundViolation&) {
      throw RoomBoundViolation("room for \"" + rec.scene_type +
                               "\" outside [1, 256]");
    }
    ++per_type[rec.scene_type][static_cast<int>(rec.granularity)];
    records.push_back(std::move(rec));
  }

  if (per_type.size() != static_cast<std::size_t>(quota.num_scene_types)) {
    throw QuotaViolation("(corpus)",
                         "expected " + std::to_string(quota.num_scene_types) +
                             " scene types, got " +
                             std::to_string(per_type.size()));
  }
  for (const auto& [scene_type, counts] : per_type) {
    if (counts[0] != quota.coarse_per_type ||
        counts[1] != quota.medium_per_type ||
        counts[2] != quota.fine_per_type) {
      throw QuotaViolation(
          scene_type, "got " + std::to_string(counts[0]) + ":" +
                          std::to_string(counts[1]) + ":" +
                          std::to_string(counts[2]) + ", want " +
                          std::to_string(quota.coarse_per_type) + ":" +
                          std::to_string(quota.medium_per_type) + ":" +
                          std::to_string(quota.fine_per_type));
    }
  }
  return records;
}

// ---- CoT SFT records ------------------------------------------------------ //

struct CotSftRecord {
  std::string prompt;  // scene summary produced by the annotator
  CotRecord cot;

  /// Trainer-agnostic line: the instruction is the scene prompt, the input
  /// carries the room context, the output is the four-step response.
  json to_sft_json(const Room& room) const {
    return json{{"version", 1},
                {"instruction", prompt},
                {"input", "The room is " + std::to_string(room.max_length) +
                              "px long and " + std::to_string(room.max_width) +
                              "px wide."},
                {"output", cot.steps_json().dump()}};
  }
};

namespace detail {

using ObjectKey = std::tuple<std::string, long long, long long, long long,
                             long long, long long>;

inline std::multiset<ObjectKey> rounded_multiset(const BevLayout& layout) {
  std::multiset<ObjectKey> keys;
  for (const auto& o : layout.objects) {
    keys.insert({normalize_class(o.label), std::llround(o.length),
                 std::llround(o.width), std::llround(o.center_x),
                 std::llround(o.center_y), std::llround(o.orientation)});
  }
  return keys;
}

}  // namespace detail

/// Asks the annotator model for a prompt + four-step CoT over a ground-truth
/// layout and rejects any record whose final answer does not reproduce the
/// ground-truth object multiset (labels and rounded fields).
inline CotSftRecord build_cot_sft_record(PipelineContext& ctx,
                                         const BevLayout& gt_layout,
                                         const Room& room) {
  std::string prompt = render_prompt(
      TemplateId::cot_datagen,
      {{"max_length", std::to_string(room.max_length)},
       {"max_width", std::to_string(room.max_width)},
       {"bev_layout", serialize_bev_layout(gt_layout)}});
  std::string response =
      ctx.call(ModelRole::descriptor, prompt, "", ctx.next_seed());
  CotRecord cot = parse_cot_record(extract_json(response));

  if (detail::rounded_multiset(cot.answer_layout()) !=
      detail::rounded_multiset(gt_layout)) {
    throw AnswerMismatch("CoT answer does not reproduce the ground-truth "
                         "object multiset");
  }
  CotSftRecord record;
  record.prompt = cot.prompt;
  record.cot = std::move(cot);
  return record;
}

struct SftBatchReport {
  struct Item {
    std::string source;
    bool accepted = false;
    std::string error;
  };
  std::vector<Item> items;
  std::vector<std::pair<CotSftRecord, Room>> records;

  json to_json() const {
    json out = json::array();
    for (const auto& i : items) {
      out.push_back(json{{"source", i.source},
                         {"accepted", i.accepted},
                         {"error", i.error}});
    }
    return out;
  }
};

inline SftBatchReport build_cot_sft_batch(
    PipelineContext& ctx,
    const std::vector<std::tuple<std::string, BevLayout, Room>>& inputs) {
  SftBatchReport report;
  for (const auto& [source, layout, room] : inputs) {
    SftBatchReport::Item item;
    item.source = source;
    try {
      report.records.emplace_back(build_cot_sft_record(ctx, layout, room),
                                  room);
      item.accepted = true;
    } catch (const Error& e) {
      item.error = e.what();
      ctx.log.warn("sft record rejected (" + source + "): " + e.what());
    }
    report.items.push_back(std::move(item));
  }
  return report;
}

inline std::string serialize_sft_records(const SftBatchReport& report) {
  std::string out;
  for (const auto& [record, room] : report.records) {
    out += record.to_sft_json(room).dump();
    out += '\n';
  }
  return out;
}

// ---- sampled layout batches ------------------------------------------------ //

struct BatchSample {
  CotRecord cot;
  BevLayout layout;
  std::array<double, 7> ratios{};
};

/// T scored samples for one prompt; the T x 7 ratio matrix feeds the
/// entropy-weighted reward.
struct SampleBatch {
  std::string prompt_id;
  std::string description;
  Room room;
  std::vector<BatchSample> samples;
  std::vector<std::string> failures;

  std::vector<std::array<double, 7>> ratio_matrix() const {
    std::vector<std::array<double, 7>> m;
    m.reserve(samples.size());
    for (const auto& s : samples) m.push_back(s.ratios);
    return m;
  }

  json to_json() const {
    json sample_list = json::array();
    for (const auto& s : samples) {
      sample_list.push_back(
          json{{"cot", s.cot.to_json()}, {"ratios", s.ratios}});
    }
    return json{{"version", 1},
                {"prompt_id", prompt_id},
                {"description", description},
                {"room",
                 {{"length", room.max_length},
                  {"width", room.max_width},
                  {"height", room.max_height}}},
                {"samples", sample_list},
                {"failures", failures}};
  }

  static SampleBatch from_json(const json& j) {
    SampleBatch batch;
    batch.prompt_id = j.value("prompt_id", "");
    batch.description = j.value("description", "");
    const json& room = j.at("room");
    batch.room = Room(room.at("length").get<int>(),
                      room.at("width").get<int>(),
                      room.at("height").get<int>());
    for (const json& s : j.at("samples")) {
      BatchSample sample;
      sample.cot = parse_cot_record(s.at("cot"));
      sample.layout = sample.cot.answer_layout();
      const json& ratios = s.at("ratios");
      if (!ratios.is_array() || ratios.size() != 7) {
        throw SchemaError("sample ratios must have 7 entries");
      }
      for (int k = 0; k < 7; ++k) sample.ratios[k] = ratios[k].get<double>();
      batch.samples.push_back(std::move(sample));
    }
    if (j.contains("failures")) {
      for (const json& f : j["failures"]) {
        batch.failures.push_back(f.get<std::string>());
      }
    }
    return batch;
  }
};

/// Generates T BEV samples with distinct seed blocks, scores each with both
/// evaluators, and keeps the per-sample ratio vectors. Failed samples are
/// recorded; the batch stands as long as two samples survive. Samples are
/// scored concurrently; results stay in sample order.
inline SampleBatch sample_layout_batch(PipelineContext& ctx,
                                       const std::string& prompt_id,
                                       const std::string& description,
                                       const Room& room, int t_samples,
                                       int parallel = 4) {
  if (t_samples < 2) throw BatchTooSmall(t_samples < 0 ? 0 : t_samples);

  SampleBatch batch;
  batch.prompt_id = prompt_id;
  batch.description = description;
  batch.room = room;

  // Each sample gets a disjoint seed block so concurrency cannot reorder
  // seed assignment.
  constexpr int kSeedsPerSample = 16;

  struct SampleOutcome {
    std::optional<BatchSample> sample;
    std::string failure;
    RunLog log;
  };

  auto run_one = [&](int index) -> SampleOutcome {
    SampleOutcome outcome;
    PipelineContext local(ctx.oracle, ctx.config);
    local.seed_cursor = ctx.config.base_seed + index * kSeedsPerSample;
    try {
      GenerateResult gen = generate_bev(local, description, room);
      std::string png = rasterize_bev(gen.layout, room, local.config.raster);
      EvaluationResult eval =
          evaluate_bev_layout(local, gen.layout, room, gen.cot, description,
                              png, /*request_suggestions=*/false);
      BatchSample sample;
      sample.cot = std::move(gen.cot);
      sample.layout = std::move(gen.layout);
      sample.ratios = eval.ratios;
      outcome.sample = std::move(sample);
    } catch (const Error& e) {
      outcome.failure =
          "sample " + std::to_string(index) + " failed: " + e.what();
    }
    outcome.log = std::move(local.log);
    return outcome;
  };

  std::vector<SampleOutcome> outcomes(t_samples);
  int stride = std::max(1, parallel);
  for (int start = 0; start < t_samples; start += stride) {
    int end = std::min(t_samples, start + stride);
    std::vector<std::future<SampleOutcome>> futures;
    futures.reserve(end - start);
    for (int i = start; i < end; ++i) {
      futures.push_back(
          std::async(std::launch::async, [&run_one, i] { return run_one(i); }));
    }
    for (int i = start; i < end; ++i) {
      outcomes[i] = futures[i - start].get();
    }
  }

  for (auto& outcome : outcomes) {
    for (auto& w : outcome.log.warnings) ctx.log.warn(std::move(w));
    for (const auto& [role, n] : outcome.log.oracle_calls) {
      ctx.log.oracle_calls[role] += n;
    }
    if (outcome.sample) {
      batch.samples.push_back(std::move(*outcome.sample));
    } else {
      batch.failures.push_back(outcome.failure);
      ctx.log.warn(batch.failures.back());
    }
  }

  if (batch.samples.size() < 2) throw BatchTooSmall(batch.samples.size());
  return batch;
}

// ---- preference pairs ------------------------------------------------------ //

struct PreferencePair {
  std::string prompt;
  std::string chosen;    // serialized four-step response
  std::string rejected;  // serialized four-step response
  double reward_chosen = 0.0;
  double reward_rejected = 0.0;

  json to_json(double threshold) const {
    return json{{"version", 1},
                {"threshold", threshold},
                {"prompt", prompt},
                {"chosen", chosen},
                {"rejected", rejected},
                {"reward_chosen", reward_chosen},
                {"reward_rejected", reward_rejected}};
  }
};

/// All ordered (chosen, rejected) index pairs whose reward difference
/// strictly exceeds the threshold.
inline std::vector<std::pair<std::size_t, std::size_t>>
pair_indices_from_rewards(const std::vector<double>& rewards,
                          double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    for (std::size_t j = 0; j < rewards.size(); ++j) {
      if (i != j && rewards[i] - rewards[j] > threshold) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

/// Emits every ordered pair (chosen, rejected) whose reward difference
/// strictly exceeds the threshold. Rewards use the batch's own entropy
/// weights (per-prompt pooling). With a per-prompt cap the widest gaps win.
inline std::vector<PreferencePair> build_dpo_pairs(
    const SampleBatch& batch, double threshold,
    std::optional<std::size_t> max_pairs_per_prompt = std::nullopt) {
  RewardReport report = compute_reward_report(batch.ratio_matrix());

  std::vector<PreferencePair> pairs;
  for (auto [i, j] : pair_indices_from_rewards(report.rewards, threshold)) {
    PreferencePair pair;
    pair.prompt = batch.description;
    pair.chosen = batch.samples[i].cot.steps_json().dump();
    pair.rejected = batch.samples[j].cot.steps_json().dump();
    pair.reward_chosen = report.rewards[i];
    pair.reward_rejected = report.rewards[j];
    pairs.push_back(std::move(pair));
  }
  if (max_pairs_per_prompt && pairs.size() > *max_pairs_per_prompt) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const PreferencePair& a, const PreferencePair& b) {
                       return a.reward_chosen - a.reward_rejected >
                              b.reward_chosen - b.reward_rejected;
                     });
    pairs.resize(*max_pairs_per_prompt);
  }
  return pairs;
}

inline std::string serialize_dpo_pairs(const std::vector<PreferencePair>& pairs,
                                       double threshold) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.to_json(threshold).dump();
    out += '\n';
  }
  return out;
}

/// Reloads a .dpo.jsonl payload and rechecks the threshold inequality on
/// every line.
inline std::vector<PreferencePair> load_dpo_pairs(std::string_view text) {
  std::vector<PreferencePair> pairs;
  for (std::string_view line : detail::split_lines(text)) {
    if (detail::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, true);
    PreferencePair p;
    p.prompt = j.at("prompt").get<std::string>();
    p.chosen = j.at("chosen").get<std::string>();
    p.rejected = j.at("rejected").get<std::string>();
    p.reward_chosen = j.at("reward_chosen").get<double>();
    p.reward_rejected = j.at("reward_rejected").get<double>();
    double threshold = j.at("threshold").get<double>();
    if (!(p.reward_chosen - p.reward_rejected > threshold)) {
      throw Error("pair violates its threshold: " +
                  detail::format_real(p.reward_chosen) + " - " +
                  detail::format_real(p.reward_rejected) + " <= " +
                  detail::format_real(threshold));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace layoutforge
