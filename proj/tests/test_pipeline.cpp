#include <gtest/gtest.h>

#include <memory>
#include <sstream>

#include "framefill/pipeline.hpp"

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

std::shared_ptr<const ff::NGramModel> toy_model() {
  std::string corpus;
  for (int i = 0; i < 50; ++i) corpus += "pour water to the cup\n";
  corpus += "pour water to the plate\ncut the pepper with the scissors\n";
  return std::make_shared<ff::NGramModel>(
      ff::NGramModel::train({ff::ingest_text(corpus, ff::CorpusFormat::kLines, "toy")}, {}));
}

ff::ObjectInventory table_top() {
  return ff::ObjectInventory({{"scissors", {0.1, 0.4, 0.0}},
                              {"plate", {0.3, -0.2, 0.0}},
                              {"bell pepper", {0.6, 0.1, 0.02}},
                              {"cup", {0.5, 0.2, 0.0}}});
}

ff::TemplateSet templates() {
  std::istringstream in("pour\tDestination\t0,0,0.2;0,0,0.05\nfill\tDestination\t0,0,0.15\n");
  return ff::TemplateSet::read_tsv(in);
}

// Prefers arguments that start early in the alphabet.
class AlphabetScorer : public ff::Scorer {
 public:
  std::string name() const override { return "alphabet"; }
  double score(const ff::VerbFrame& f) const override {
    return -256.0 * static_cast<double>((*f.arg1)[0]) - static_cast<double>((*f.arg2)[0]);
  }
};

}  // namespace

TEST(Complete, PourMeSomeWaterPicksCup) {
  const ff::LmScorer scorer(toy_model(), lex());
  const auto f = ff::complete(ff::tokenize("Pour me some water"), table_top(), scorer, lex());
  EXPECT_EQ(f, frame("pour", "water", "cup"));
  EXPECT_TRUE(f.complete());
}

TEST(Complete, AlreadyCompleteReturnedUnchanged) {
  const AlphabetScorer scorer;
  EXPECT_EQ(ff::complete(ff::tokenize("pour the water into the cup"), table_top(), scorer, lex()),
            frame("pour", "water", "cup"));
}

TEST(Complete, SingleObjectInventoryIsScorerIndependent) {
  const ff::ObjectInventory only_cup(std::vector<ff::InventoryObject>{{"cup", {}}});
  const AlphabetScorer alpha;
  const ff::RandomScorer random(4);
  const ff::LmScorer lm(toy_model(), lex());
  for (const ff::Scorer* s : std::vector<const ff::Scorer*>{&alpha, &random, &lm}) {
    EXPECT_EQ(ff::complete(ff::tokenize("pour me some water"), only_cup, *s, lex()),
              frame("pour", "water", "cup"));
  }
}

TEST(Complete, MissingRole1IsFilled) {
  const AlphabetScorer scorer;
  auto shell = lex().shell("fill");
  shell.arg2 = "water";
  EXPECT_EQ(ff::complete_frame(shell, table_top(), scorer), frame("fill", "cup", "water"));
}

TEST(Complete, ErrorsPropagate) {
  const AlphabetScorer scorer;
  auto code = [&](const std::string& text, const ff::ObjectInventory& inv) {
    try {
      ff::complete(ff::tokenize(text), inv, scorer, lex());
    } catch (const ff::Error& e) {
      return e.code();
    }
    return ff::ErrorCode::kIo;
  };
  EXPECT_EQ(code("hello there", table_top()), ff::ErrorCode::kNoPredicate);
  EXPECT_EQ(code("pour me some water", ff::ObjectInventory{}), ff::ErrorCode::kEmptyInventory);
  EXPECT_EQ(code("pour it into the cup", table_top()), ff::ErrorCode::kMalformedFrame);
}

TEST(Plan, WaypointsAreObjectRelative) {
  const auto p = ff::plan(frame("pour", "water", "cup"), table_top(), templates());
  ASSERT_EQ(p.waypoints.size(), 2u);
  EXPECT_EQ(p.waypoints[0], (ff::Vec3{0.5, 0.2, 0.2}));
  EXPECT_EQ(p.waypoints[1], (ff::Vec3{0.5, 0.2, 0.05}));
}

TEST(Plan, TranslatesRigidlyWithTarget) {
  auto inv = table_top();
  ff::ObjectInventory moved;
  for (auto o : inv.objects()) {
    if (o.label == "cup") o.position = o.position + ff::Vec3{1, 0, 0};
    moved.add(o);
  }
  const auto a = ff::plan(frame("pour", "water", "cup"), inv, templates());
  const auto b = ff::plan(frame("pour", "water", "cup"), moved, templates());
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
    EXPECT_EQ(b.waypoints[i], (a.waypoints[i] + ff::Vec3{1, 0, 0}));
  }
}

TEST(Plan, Errors) {
  auto code = [&](const ff::VerbFrame& f) {
    try {
      ff::plan(f, table_top(), templates());
    } catch (const ff::Error& e) {
      return e.code();
    }
    return ff::ErrorCode::kIo;
  };
  EXPECT_EQ(code(frame("pour", "water", "bucket")), ff::ErrorCode::kObjectNotFound);
  EXPECT_EQ(code(frame("heat", "soup", "cup")), ff::ErrorCode::kNoTemplate);
}

TEST(Plan, JsonShapeAndMultiWordLookup) {
  std::istringstream in("fry\tInstrument\t0,0,0.1\n");
  const auto p = ff::plan(frame("fry", "egg", "pepper"), table_top(), ff::TemplateSet::read_tsv(in));
  const auto j = ff::to_json(p);
  EXPECT_EQ(j["frame"]["a2"], "pepper");
  ASSERT_EQ(j["waypoints"].size(), 1u);
  EXPECT_DOUBLE_EQ(j["waypoints"][0][0].get<double>(), 0.6);
}

TEST(Templates, ValidationAgainstLexicon) {
  templates().validate(lex());
  std::istringstream bad_role("pour\tInstrument\t0,0,1\n");
  EXPECT_THROW(ff::TemplateSet::read_tsv(bad_role).validate(lex()), ff::Error);
  std::istringstream no_points("pour\tDestination\t\n");
  EXPECT_THROW(ff::TemplateSet::read_tsv(no_points), ff::Error);
  std::istringstream two_coords("pour\tDestination\t0,1\n");
  EXPECT_THROW(ff::TemplateSet::read_tsv(two_coords), ff::Error);
}

TEST(Inventory, JsonLoadingAndValidation) {
  const auto inv = ff::ObjectInventory::from_json(
      nlohmann::json::parse(R"([{"label":"cup","position":[0.5,0.2,0.0]},{"label":"bell pepper","position":[1,2,3]}])"));
  ASSERT_EQ(inv.size(), 2u);
  EXPECT_EQ(inv.find("pepper")->label, "bell pepper");
  EXPECT_THROW(ff::ObjectInventory::from_json(nlohmann::json::parse(R"([{"label":"","position":[0,0,0]}])")),
               ff::Error);
  EXPECT_THROW(ff::ObjectInventory::from_json(nlohmann::json::parse(R"([{"label":"cup","position":[0,0]}])")),
               ff::Error);
}
