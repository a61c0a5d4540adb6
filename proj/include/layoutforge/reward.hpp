#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "layoutforge/detail/util.hpp"
#include "layoutforge/errors.hpp"
#include "layoutforge/layout.hpp"

namespace layoutforge {

/// The seven object-level criteria. C1-C3 belong to the Spatial Evaluator,
/// C4-C7 to the Quantitative Evaluator.
enum class CriterionId : int {
  C1_RelativeAlignment = 1,
  C2_GlobalPositioning = 2,
  C3_CotConsistency = 3,
  C4_InterObjectDistance = 4,
  C5_SizeProportion = 5,
  C6_OrientationValidity = 6,
  C7_QuantityAlignment = 7,
};

inline const char* criterion_name(CriterionId id) {
  switch (id) {
    case CriterionId::C1_RelativeAlignment: return "relative_alignment";
    case CriterionId::C2_GlobalPositioning: return "global_positioning";
    case CriterionId::C3_CotConsistency: return "cot_consistency";
    case CriterionId::C4_InterObjectDistance: return "inter_object_distance";
    case CriterionId::C5_SizeProportion: return "size_proportion";
    case CriterionId::C6_OrientationValidity: return "orientation_validity";
    case CriterionId::C7_QuantityAlignment: return "quantity_alignment";
  }
  return "unknown";
}

/// Per-class boolean verdicts. Spatial verdicts hold (C1, C2, C3);
/// quantitative ones hold (C4, C5, C6, C7). Class keys are normalized
/// labels; instance counts record how many layout objects each class covers.
struct VerdictMatrix {
  struct ClassVerdicts {
    std::optional<std::array<bool, 3>> spatial;  // C1, C2, C3
    std::optional<std::array<bool, 4>> quant;    // C4, C5, C6, C7
  };

  std::map<std::string, ClassVerdicts> classes;
  std::map<std::string, int> instance_counts;
  std::map<std::string, int> expected_counts;  // from the schema extension
  std::vector<std::string> warnings;

  void merge_from(const VerdictMatrix& other) {
    for (const auto& [name, v] : other.classes) {
      auto& mine = classes[name];
      if (v.spatial) mine.spatial = v.spatial;
      if (v.quant) mine.quant = v.quant;
    }
    for (const auto& [name, n] : other.instance_counts) {
      instance_counts[name] = n;
    }
    for (const auto& [name, n] : other.expected_counts) {
      expected_counts[name] = n;
    }
    warnings.insert(warnings.end(), other.warnings.begin(),
                    other.warnings.end());
  }
};

namespace detail {

inline bool parse_yes_no(const json& token, const std::string& klass) {
  if (!token.is_string()) {
    throw SchemaError("verdict for \"" + klass + "\" is not a string");
  }
  std::string t = to_lower(trim(token.get<std::string>()));
  if (t == "yes") return true;
  if (t == "no") return false;
  throw SchemaError("verdict for \"" + klass + "\" is not Yes/No: " +
                    token.get<std::string>());
}

template <std::size_t N>
std::array<bool, N> parse_verdict_list(const json& list,
                                       const std::string& klass) {
  if (!list.is_array() || list.size() != N) {
    throw SchemaError("class \"" + klass + "\" needs exactly " +
                      std::to_string(N) + " judgments, got " +
                      (list.is_array() ? std::to_string(list.size())
                                       : std::string("non-list")));
  }
  std::array<bool, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = parse_yes_no(list[i], klass);
  return out;
}

}  // namespace detail

/// Parses the Spatial Evaluator response: class -> three Yes/No judgments
/// (C1 relative alignment, C2 global positioning, C3 CoT consistency).
/// Payload classes missing from the layout are dropped with a warning;
/// layout classes missing from the payload default to all-No with a warning.
inline VerdictMatrix parse_spatial_verdicts(const json& payload,
                                            const BevLayout& layout) {
  if (!payload.is_object()) {
    throw SchemaError("spatial verdict payload is not an object");
  }
  VerdictMatrix m;
  m.instance_counts = class_counts(layout);

  for (auto it = payload.begin(); it != payload.end(); ++it) {
    if (detail::normalize_key(it.key()) == "suggestions") continue;
    std::string klass = detail::normalize_class(it.key());
    auto verdicts = detail::parse_verdict_list<3>(it.value(), klass);
    if (!m.instance_counts.count(klass)) {
      m.warnings.push_back("spatial verdict for \"" + klass +
                           "\" has no matching layout object; dropped");
      continue;
    }
    m.classes[klass].spatial = verdicts;
  }
  for (const auto& [klass, n] : m.instance_counts) {
    if (!m.classes.count(klass) || !m.classes[klass].spatial) {
      m.classes[klass].spatial = std::array<bool, 3>{false, false, false};
      m.warnings.push_back("no spatial verdict for layout class \"" + klass +
                           "\"; defaulted to all-No");
    }
  }
  return m;
}

/// Parses the Quantitative Evaluator response: class -> four Yes/No
/// judgments in prompt order (distance, quantity, size, orientation), which
/// map to criteria (C4, C7, C5, C6). An optional "expected_counts" member
/// carries per-class expected instance counts for the quantity ratio.
inline VerdictMatrix parse_quant_verdicts(const json& payload,
                                          const BevLayout& layout) {
  if (!payload.is_object()) {
    throw SchemaError("quantitative verdict payload is not an object");
  }
  VerdictMatrix m;
  m.instance_counts = class_counts(layout);

  for (auto it = payload.begin(); it != payload.end(); ++it) {
    std::string key = detail::normalize_key(it.key());
    if (key == "suggestions") continue;
    if (key == "expected_counts") {
      if (!it.value().is_object()) {
        throw SchemaError("expected_counts must map classes to integers");
      }
      for (auto ec = it.value().begin(); ec != it.value().end(); ++ec) {
        if (!ec.value().is_number_integer() || ec.value().get<int>() < 0) {
          throw SchemaError("expected count for \"" + ec.key() +
                            "\" is not a non-negative integer");
        }
        m.expected_counts[detail::normalize_class(ec.key())] =
            ec.value().get<int>();
      }
      continue;
    }
    std::string klass = detail::normalize_class(it.key());
    auto prompt_order = detail::parse_verdict_list<4>(it.value(), klass);
    if (!m.instance_counts.count(klass)) {
      m.warnings.push_back("quantitative verdict for \"" + klass +
                           "\" has no matching layout object; dropped");
      continue;
    }
    // prompt order (distance, quantity, size, orientation) -> C4, C5, C6, C7
    std::array<bool, 4> by_criterion{};
    by_criterion[0] = prompt_order[0];  // C4 inter-object distance
    by_criterion[1] = prompt_order[2];  // C5 size proportion
    by_criterion[2] = prompt_order[3];  // C6 orientation validity
    by_criterion[3] = prompt_order[1];  // C7 quantity alignment
    m.classes[klass].quant = by_criterion;
  }
  for (const auto& [klass, n] : m.instance_counts) {
    if (!m.classes.count(klass) || !m.classes[klass].quant) {
      m.classes[klass].quant =
          std::array<bool, 4>{false, false, false, false};
      m.warnings.push_back("no quantitative verdict for layout class \"" +
                           klass + "\"; defaulted to all-No");
    }
  }
  return m;
}

/// Validity ratios r_1..r_6: a class verdict applies to every instance of
/// that class, O_k counts satisfying objects, r_k = O_k / N.
inline std::array<double, 6> criterion_ratios(const VerdictMatrix& verdicts,
                                              const BevLayout& layout) {
  if (layout.objects.empty()) throw EmptyLayout();
  double n = static_cast<double>(layout.objects.size());
  std::array<double, 6> satisfied{};

  for (const auto& o : layout.objects) {
    std::string klass = detail::normalize_class(o.label);
    auto it = verdicts.classes.find(klass);
    if (it == verdicts.classes.end()) continue;
    if (it->second.spatial) {
      for (int k = 0; k < 3; ++k) {
        if ((*it->second.spatial)[k]) satisfied[k] += 1.0;
      }
    }
    if (it->second.quant) {
      // quant array order is (C4, C5, C6, C7); C7 is not a per-object ratio
      for (int k = 0; k < 3; ++k) {
        if ((*it->second.quant)[k]) satisfied[3 + k] += 1.0;
      }
    }
  }

  std::array<double, 6> ratios{};
  for (int k = 0; k < 6; ++k) ratios[k] = satisfied[k] / n;
  return ratios;
}

/// r_7 = max(0, 1 - sum_c |actual_c - expected_c| / sum_c expected_c).
/// Classes present only in `actual` count with expected 0.
inline double quantity_alignment_ratio(
    const std::map<std::string, int>& expected,
    const std::map<std::string, int>& actual) {
  double expected_total = 0.0;
  for (const auto& [klass, n] : expected) expected_total += n;
  if (expected.empty() || expected_total <= 0.0) throw ZeroExpectedTotal();

  double deviation = 0.0;
  for (const auto& [klass, n_expected] : expected) {
    auto it = actual.find(klass);
    int n_actual = it == actual.end() ? 0 : it->second;
    deviation += std::abs(n_actual - n_expected);
  }
  for (const auto& [klass, n_actual] : actual) {
    if (!expected.count(klass)) deviation += n_actual;
  }
  return std::max(0.0, 1.0 - deviation / expected_total);
}

/// Full ratio vector for one sample. r_7 uses the expected counts captured
/// from the evaluator payload when present; otherwise it falls back to the
/// fraction of classes whose quantity judgment was Yes.
inline std::array<double, 7> ratio_vector(const VerdictMatrix& verdicts,
                                          const BevLayout& layout) {
  std::array<double, 7> r{};
  auto r16 = criterion_ratios(verdicts, layout);
  for (int k = 0; k < 6; ++k) r[k] = r16[k];

  if (!verdicts.expected_counts.empty()) {
    r[6] = quantity_alignment_ratio(verdicts.expected_counts,
                                    class_counts(layout));
  } else {
    double yes = 0.0, total = 0.0;
    for (const auto& [klass, v] : verdicts.classes) {
      if (!verdicts.instance_counts.count(klass) || !v.quant) continue;
      total += 1.0;
      if ((*v.quant)[3]) yes += 1.0;
    }
    r[6] = total > 0.0 ? yes / total : 0.0;
  }
  return r;
}

/// Entropy weighting over T samples x K criteria.
/// p_k^(j) = r_k^(j) / sum_j r_k^(j); H_k = -(1/ln T) sum_j p ln p with
/// 0 ln 0 := 0; an all-zero criterion column is uninformative (H_k := 1).
/// w_k = (1 - H_k) / sum_k (1 - H_k), uniform when every H_k is 1.
struct EntropyWeights {
  std::vector<double> entropy;
  std::vector<double> weight;
};

inline EntropyWeights entropy_weights(
    const std::vector<std::vector<double>>& ratios) {
  std::size_t t = ratios.size();
  if (t == 1) throw SingleSample();
  if (t == 0) throw Error("entropy weights need a nonempty ratio matrix");
  std::size_t k_count = ratios[0].size();
  for (const auto& row : ratios) {
    if (row.size() != k_count) {
      throw Error("ratio matrix rows have inconsistent widths");
    }
  }

  double ln_t = std::log(static_cast<double>(t));
  EntropyWeights out;
  out.entropy.resize(k_count);
  out.weight.resize(k_count);

  for (std::size_t k = 0; k < k_count; ++k) {
    double column_sum = 0.0;
    for (std::size_t j = 0; j < t; ++j) column_sum += ratios[j][k];
    if (column_sum <= 0.0) {
      out.entropy[k] = 1.0;
      continue;
    }
    double h = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      double p = ratios[j][k] / column_sum;
      if (p > 0.0) h -= p * std::log(p);
    }
    out.entropy[k] = h / ln_t;
  }

  double informative = 0.0;
  for (double h : out.entropy) informative += 1.0 - h;
  if (informative <= 0.0) {
    for (double& w : out.weight) w = 1.0 / static_cast<double>(k_count);
  } else {
    for (std::size_t k = 0; k < k_count; ++k) {
      out.weight[k] = (1.0 - out.entropy[k]) / informative;
    }
  }
  return out;
}

/// R^(j) = sum_k w_k r_k^(j). Weights must sum to 1 within 1e-6.
inline std::vector<double> aggregate_rewards(
    const std::vector<std::vector<double>>& ratios,
    const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-6) throw WeightSumError(sum);

  std::vector<double> rewards;
  rewards.reserve(ratios.size());
  for (const auto& row : ratios) {
    if (row.size() != weights.size()) {
      throw Error("ratio row width does not match weight count");
    }
    double r = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) r += weights[k] * row[k];
    rewards.push_back(r);
  }
  return rewards;
}

/// Entropies, weights and rewards in one pass over a batch's T x 7
/// ratio matrix.
struct RewardReport {
  std::vector<std::array<double, 7>> ratios;
  std::array<double, 7> entropies{};
  std::array<double, 7> weights{};
  std::vector<double> rewards;

  json to_json() const {
    json rows = json::array();
    for (const auto& r : ratios) rows.push_back(r);
    return json{{"ratios", rows},
                {"entropies", entropies},
                {"weights", weights},
                {"rewards", rewards}};
  }
};

inline RewardReport compute_reward_report(
    const std::vector<std::array<double, 7>>& ratios) {
  std::vector<std::vector<double>> rows;
  rows.reserve(ratios.size());
  for (const auto& r : ratios) rows.emplace_back(r.begin(), r.end());

  RewardReport report;
  report.ratios = ratios;
  auto ew = entropy_weights(rows);
  for (int k = 0; k < 7; ++k) {
    report.entropies[k] = ew.entropy[k];
    report.weights[k] = ew.weight[k];
  }
  report.rewards = aggregate_rewards(rows, ew.weight);
  return report;
}

}  // namespace layoutforge
