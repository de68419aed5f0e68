#pragma once

// Human plausibility judgments, the lambda split into positive / ambiguous /
// negative subsets, and k-candidate test scenario generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "framefill/error.hpp"
#include "framefill/frames.hpp"
#include "framefill/rng.hpp"
#include "json.hpp"

namespace framefill {

inline constexpr std::size_t kNominalRatingsPerFrame = 5;

struct PlausibilityRecord {
  VerbFrame frame;
  std::vector<int> ratings;

  double mean() const {
    return static_cast<double>(std::accumulate(ratings.begin(), ratings.end(), 0)) /
           static_cast<double>(ratings.size());
  }
};

// Throws on an incomplete frame, no ratings, or a rating outside [1, 5].
// Fewer than five ratings only produces a warning.
inline void validate_record(const PlausibilityRecord& r, std::vector<std::string>* warnings = nullptr) {
  if (!r.frame.complete()) {
    throw Error(ErrorCode::kFormat, "judged frame " + describe(r.frame) + " is incomplete");
  }
  if (r.ratings.empty()) throw Error(ErrorCode::kFormat, describe(r.frame) + " has no ratings");
  for (int s : r.ratings) {
    if (s < 1 || s > 5) {
      throw Error(ErrorCode::kFormat, describe(r.frame) + " has rating " + std::to_string(s) +
                                          " outside [1, 5]");
    }
  }
  if (r.ratings.size() < kNominalRatingsPerFrame && warnings != nullptr) {
    warnings->push_back(describe(r.frame) + " has only " + std::to_string(r.ratings.size()) +
                        " ratings");
  }
}

inline nlohmann::json to_json(const PlausibilityRecord& r) {
  nlohmann::json j = to_json(r.frame);
  j["ratings"] = r.ratings;
  return j;
}

inline PlausibilityRecord record_from_json(const nlohmann::json& j,
                                           std::vector<std::string>* warnings = nullptr) {
  PlausibilityRecord r;
  r.frame = frame_from_json(j);
  if (!j.contains("ratings") || !j["ratings"].is_array()) {
    throw Error(ErrorCode::kFormat, "judgment needs a \"ratings\" array");
  }
  for (const auto& v : j["ratings"]) {
    if (!v.is_number_integer()) throw Error(ErrorCode::kFormat, "ratings must be integers");
    r.ratings.push_back(v.get<int>());
  }
  validate_record(r, warnings);
  return r;
}

// JSON Lines, one record per line; blank lines are ignored.
inline std::vector<PlausibilityRecord> read_judgments(std::istream& in,
                                                      std::vector<std::string>* warnings = nullptr,
                                                      const std::string& origin = "<stream>") {
  std::vector<PlausibilityRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line), warnings));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<PlausibilityRecord> load_judgments(const std::string& path,
                                                      std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read judgments '" + path + "'");
  return read_judgments(in, warnings, path);
}

// --- split ---------------------------------------------------------------------

enum class Subset { kPositive, kAmbiguous, kNegative };

// lambda <= 2 keeps the subsets disjoint: 5 - lambda >= 1 + lambda.
inline void validate_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 2.0)) {
    throw Error(ErrorCode::kInvalidLambda, "plausibility threshold must lie in (0, 2], got " +
                                               std::to_string(lambda));
  }
}

// Positive iff mean > 5 - lambda, negative iff mean < 1 + lambda (strict).
// Means within kBoundaryTolerance of a threshold count as on it, so that
// e.g. 8/5 against 1 + 0.6 is ambiguous regardless of rounding.
inline constexpr double kBoundaryTolerance = 1e-9;

inline Subset classify(double mean, double lambda) {
  if (mean > 5.0 - lambda + kBoundaryTolerance) return Subset::kPositive;
  if (mean < 1.0 + lambda - kBoundaryTolerance) return Subset::kNegative;
  return Subset::kAmbiguous;
}

struct PredicateSplit {
  std::vector<PlausibilityRecord> positive;
  std::vector<PlausibilityRecord> ambiguous;
  std::vector<PlausibilityRecord> negative;

  std::size_t size() const { return positive.size() + ambiguous.size() + negative.size(); }
};

using Splits = std::map<std::string, PredicateSplit>;

inline Splits split(const std::vector<PlausibilityRecord>& records, double lambda) {
  validate_lambda(lambda);
  Splits out;
  for (const auto& r : records) {
    auto& s = out[r.frame.predicate];
    switch (classify(r.mean(), lambda)) {
      case Subset::kPositive: s.positive.push_back(r); break;
      case Subset::kAmbiguous: s.ambiguous.push_back(r); break;
      case Subset::kNegative: s.negative.push_back(r); break;
    }
  }
  return out;
}

// --- scenarios -------------------------------------------------------------------

// Candidates in a scenario share the predicate and the argument in `fixed_slot`
// (1 or 2), whose value is `value`.
struct GroupKey {
  std::string predicate;
  int fixed_slot = 1;
  std::string role;
  std::string value;

  auto operator<=>(const GroupKey&) const = default;
};

struct Scenario {
  std::vector<VerbFrame> candidates;
  std::size_t truth_index = 0;
  GroupKey group;
  std::uint64_t seed = 0;

  std::size_t k() const { return candidates.size(); }
  const VerbFrame& truth() const { return candidates.at(truth_index); }
};

inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json j;
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : s.candidates) j["candidates"].push_back(to_json(c));
  j["truth_index"] = s.truth_index;
  j["k"] = s.k();
  j["group"] = {{"v", s.group.predicate},
                {"fixed", s.group.fixed_slot == 1 ? "a1" : "a2"},
                {"role", s.group.role},
                {"value", s.group.value}};
  j["seed"] = s.seed;
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    for (const auto& c : j.at("candidates")) s.candidates.push_back(frame_from_json(c));
    s.truth_index = j.at("truth_index").get<std::size_t>();
    const auto& g = j.at("group");
    s.group.predicate = g.at("v").get<std::string>();
    s.group.fixed_slot = g.at("fixed").get<std::string>() == "a1" ? 1 : 2;
    s.group.role = g.at("role").get<std::string>();
    s.group.value = g.at("value").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (j.at("k").get<std::size_t>() != s.candidates.size()) {
      throw Error(ErrorCode::kFormat, "scenario k does not match its candidate count");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad scenario: ") + e.what());
  }
  if (s.candidates.empty() || s.truth_index >= s.candidates.size()) {
    throw Error(ErrorCode::kFormat, "scenario truth_index out of range");
  }
  return s;
}

inline void write_scenarios(std::ostream& out, const std::vector<Scenario>& scenarios) {
  for (const auto& s : scenarios) out << to_json(s).dump() << '\n';
}

inline std::vector<Scenario> read_scenarios(std::istream& in, const std::string& origin = "<stream>") {
  std::vector<Scenario> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(scenario_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

namespace detail {

struct ScenarioGroup {
  GroupKey key;
  std::vector<VerbFrame> positives;
  std::vector<VerbFrame> negatives;
};

// Groups frames by (predicate, fixed slot, fixed value). Every frame lands in
// two groups, one per fixed slot. Duplicate frames collapse, and a frame that
// is both positive and negative is kept as positive only.
inline std::vector<ScenarioGroup> build_groups(const Splits& splits) {
  std::map<GroupKey, std::pair<std::set<VerbFrame>, std::set<VerbFrame>>> groups;
  auto add = [&](const VerbFrame& f, bool positive) {
    for (int slot : {1, 2}) {
      GroupKey key{f.predicate, slot, slot == 1 ? f.role1 : f.role2, slot == 1 ? *f.arg1 : *f.arg2};
      auto& [pos, neg] = groups[key];
      (positive ? pos : neg).insert(f);
    }
  };
  for (const auto& [pred, s] : splits) {
    for (const auto& r : s.positive) add(r.frame, true);
    for (const auto& r : s.negative) add(r.frame, false);
  }
  std::vector<ScenarioGroup> out;
  for (auto& [key, sets] : groups) {
    auto& [pos, neg] = sets;
    ScenarioGroup g{key, {pos.begin(), pos.end()}, {}};
    for (const auto& f : neg) {
      if (!pos.count(f)) g.negatives.push_back(f);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

// Draws `count` scenarios with one positive and k - 1 negatives each.
// Feasible groups (>= 1 positive and >= k - 1 negatives) are visited
// round-robin in lexicographic key order; within a scenario negatives are
// sampled without replacement and candidate order is shuffled. Positives may
// recur across scenarios. Pure function of (splits, k, count, seed).
inline std::vector<Scenario> make_scenarios(const Splits& splits, int k, std::size_t count,
                                            std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be >= 2");
  const auto all = detail::build_groups(splits);
  std::vector<const detail::ScenarioGroup*> feasible;
  std::size_t max_pos = 0, max_neg = 0;
  for (const auto& g : all) {
    max_pos = std::max(max_pos, g.positives.size());
    if (!g.positives.empty()) max_neg = std::max(max_neg, g.negatives.size());
    if (!g.positives.empty() && g.negatives.size() + 1 >= static_cast<std::size_t>(k)) {
      feasible.push_back(&g);
    }
  }
  if (feasible.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                "no group supports k=" + std::to_string(k) + " (" + std::to_string(all.size()) +
                    " groups; largest positive subset " + std::to_string(max_pos) +
                    ", most negatives beside a positive " + std::to_string(max_neg) + ")");
  }

  RandomStream rng(seed);
  std::vector<Scenario> out;
  out.reserve(count);
  std::vector<std::size_t> idx;
  for (std::size_t n = 0; n < count; ++n) {
    const auto& g = *feasible[n % feasible.size()];
    Scenario s;
    s.group = g.key;
    s.seed = seed;
    s.candidates.push_back(g.positives[rng.below(g.positives.size())]);
    idx.resize(g.negatives.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (int i = 0; i < k - 1; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) + rng.below(idx.size() - static_cast<std::size_t>(i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
      s.candidates.push_back(g.negatives[idx[static_cast<std::size_t>(i)]]);
    }
    std::vector<std::size_t> order(s.candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<VerbFrame> shuffled;
    shuffled.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      shuffled.push_back(std::move(s.candidates[order[i]]));
      if (order[i] == 0) s.truth_index = i;
    }
    s.candidates = std::move(shuffled);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace framefill
