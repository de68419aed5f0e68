#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "framefill/judgments.hpp"

namespace ff = framefill;

namespace {

const ff::RoleLexicon& lex() {
  static const ff::RoleLexicon l = ff::RoleLexicon::default_lexicon();
  return l;
}

ff::VerbFrame frame(const std::string& v, const std::string& a1, const std::string& a2) {
  auto f = lex().shell(v);
  f.arg1 = a1;
  f.arg2 = a2;
  return f;
}

ff::PlausibilityRecord record(const std::string& v, const std::string& a1, const std::string& a2,
                              std::vector<int> ratings) {
  return {frame(v, a1, a2), std::move(ratings)};
}

// pour / Theme=water: one positive (cup) and five negatives.
std::vector<ff::PlausibilityRecord> pour_group() {
  std::vector<ff::PlausibilityRecord> r = {record("pour", "water", "cup", {5, 5, 5, 4, 5})};
  for (const char* o : {"scissors", "plate", "sponge", "fork", "knife"}) {
    r.push_back(record("pour", "water", o, {1, 1, 2, 1, 1}));
  }
  return r;
}

}  // namespace

TEST(Record, MeanAndValidation) {
  EXPECT_DOUBLE_EQ(record("pour", "water", "cup", {4, 4, 5, 4, 4}).mean(), 4.2);
  std::vector<std::string> warnings;
  ff::validate_record(record("pour", "water", "cup", {5, 5}), &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(ff::validate_record(record("pour", "water", "cup", {0, 5, 5, 5, 5})), ff::Error);
  EXPECT_THROW(ff::validate_record(record("pour", "water", "cup", {})), ff::Error);
}

TEST(Record, JsonLines) {
  std::istringstream in(
      R"({"v":"pour","r1":"Theme","a1":"water","r2":"Destination","a2":"cup","ratings":[5,4,5,5,5]})"
      "\n\n"
      R"({"v":"pour","r1":"Theme","a1":"water","r2":"Destination","a2":"fork","ratings":[1,1,1]})"
      "\n");
  std::vector<std::string> warnings;
  auto records = ff::read_judgments(in, &warnings);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].frame, frame("pour", "water", "cup"));
  EXPECT_EQ(warnings.size(), 1u);

  std::istringstream incomplete(R"({"v":"pour","r1":"Theme","a1":"water","r2":"Destination","a2":null,"ratings":[5]})");
  EXPECT_THROW(ff::read_judgments(incomplete), ff::Error);
}

TEST(Split, ThresholdsAreStrict) {
  EXPECT_EQ(ff::classify(4.2, 1.0), ff::Subset::kPositive);
  EXPECT_EQ(ff::classify(4.0, 1.0), ff::Subset::kAmbiguous);
  EXPECT_EQ(ff::classify(2.0, 1.0), ff::Subset::kAmbiguous);
  EXPECT_EQ(ff::classify(2.9, 2.0), ff::Subset::kNegative);
  EXPECT_EQ(ff::classify(3.0, 2.0), ff::Subset::kAmbiguous);
}

TEST(Split, InvalidLambda) {
  for (double bad : {0.0, -1.0, 2.01}) {
    try {
      ff::split({}, bad);
      FAIL() << bad;
    } catch (const ff::Error& e) {
      EXPECT_EQ(e.code(), ff::ErrorCode::kInvalidLambda);
    }
  }
}

TEST(Split, PartitionsPerPredicate) {
  auto recs = pour_group();
  recs.push_back(record("heat", "soup", "pot", {3, 3, 3, 3, 3}));
  auto s = ff::split(recs, 1.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s["pour"].positive.size(), 1u);
  EXPECT_EQ(s["pour"].negative.size(), 5u);
  EXPECT_EQ(s["heat"].ambiguous.size(), 1u);
}

TEST(Scenarios, SingleGroupConstruction) {
  auto scen = ff::make_scenarios(ff::split(pour_group(), 1.0), 6, 1, 17);
  ASSERT_EQ(scen.size(), 1u);
  const auto& s = scen[0];
  EXPECT_EQ(s.k(), 6u);
  EXPECT_EQ(s.truth(), frame("pour", "water", "cup"));
  EXPECT_EQ(s.group.predicate, "pour");
  EXPECT_EQ(s.group.fixed_slot, 1);
  EXPECT_EQ(s.group.value, "water");
  std::set<std::string> varying;
  for (const auto& c : s.candidates) {
    EXPECT_EQ(c.arg1, "water");
    varying.insert(*c.arg2);
  }
  EXPECT_EQ(varying.size(), 6u);
}

TEST(Scenarios, GroupWithoutPositiveSkipped) {
  auto recs = pour_group();
  recs.erase(recs.begin());
  try {
    ff::make_scenarios(ff::split(recs, 1.0), 6, 1, 1);
    FAIL();
  } catch (const ff::Error& e) {
    EXPECT_EQ(e.code(), ff::ErrorCode::kInsufficientData);
  }
  // k beyond the available negatives
  EXPECT_THROW(ff::make_scenarios(ff::split(pour_group(), 1.0), 7, 1, 1), ff::Error);
  EXPECT_THROW(ff::make_scenarios(ff::split(pour_group(), 1.0), 1, 1, 1), ff::Error);
}

TEST(Scenarios, SeededAndSerializable) {
  std::vector<ff::PlausibilityRecord> recs;
  for (const char* t : {"water", "milk", "juice"}) {
    for (const char* o : {"cup", "glass", "mug"}) recs.push_back(record("pour", t, o, {5, 5, 5, 5, 5}));
    for (const char* o : {"fork", "knife", "shoe", "sock", "lamp", "book", "pen"}) {
      recs.push_back(record("pour", t, o, {1, 1, 1, 1, 1}));
    }
  }
  const auto splits = ff::split(recs, 1.0);
  auto a = ff::make_scenarios(splits, 4, 50, 99);
  auto b = ff::make_scenarios(splits, 4, 50, 99);
  std::ostringstream sa, sb;
  ff::write_scenarios(sa, a);
  ff::write_scenarios(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.size(), 50u);

  std::istringstream in(sa.str());
  auto back = ff::read_scenarios(in);
  ASSERT_EQ(back.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(back[i].candidates, a[i].candidates);
    EXPECT_EQ(back[i].truth_index, a[i].truth_index);
    EXPECT_EQ(back[i].group, a[i].group);
  }

  std::ostringstream other;
  ff::write_scenarios(other, ff::make_scenarios(splits, 4, 50, 100));
  EXPECT_NE(other.str(), sa.str());
}

TEST(Scenarios, InvariantsHoldOnRandomData) {
  std::mt19937 rng(21);
  const std::vector<std::string> verbs = {"pour", "fry", "fill"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ff::PlausibilityRecord> recs;
    for (const auto& v : verbs) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 12; ++b) {
          std::vector<int> r(5);
          for (auto& x : r) x = 1 + static_cast<int>(rng() % 5);
          if (rng() % 3 == 0) std::fill(r.begin(), r.end(), 5);
          recs.push_back(record(v, "t" + std::to_string(a), "o" + std::to_string(b), r));
        }
      }
    }
    const double lambda = 0.6 + 0.2 * static_cast<double>(rng() % 8);
    const auto splits = ff::split(recs, lambda);
    std::set<ff::VerbFrame> pos, neg;
    for (const auto& [p, s] : splits) {
      for (const auto& r : s.positive) pos.insert(r.frame);
      for (const auto& r : s.negative) neg.insert(r.frame);
    }
    std::vector<ff::Scenario> scen;
    try {
      scen = ff::make_scenarios(splits, 4, 40, rng());
    } catch (const ff::Error& e) {
      ASSERT_EQ(e.code(), ff::ErrorCode::kInsufficientData);
      continue;
    }
    for (const auto& s : scen) {
      std::size_t positives = 0;
      std::set<std::string> varying;
      for (std::size_t i = 0; i < s.k(); ++i) {
        const auto& c = s.candidates[i];
        ASSERT_EQ(c.predicate, s.group.predicate);
        ASSERT_EQ(s.group.fixed_slot == 1 ? *c.arg1 : *c.arg2, s.group.value);
        varying.insert(s.group.fixed_slot == 1 ? *c.arg2 : *c.arg1);
        if (pos.count(c)) {
          ++positives;
          ASSERT_EQ(i, s.truth_index);
        } else {
          ASSERT_TRUE(neg.count(c));
        }
      }
      ASSERT_EQ(positives, 1u);
      ASSERT_EQ(varying.size(), s.k());
    }
  }
}
