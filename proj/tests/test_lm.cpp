#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "framefill/lm.hpp"

namespace ff = framefill;

namespace {

ff::Document lines(const std::string& text) {
  return ff::ingest_text(text, ff::CorpusFormat::kLines, "mem");
}

ff::NGramModel train(const std::string& text, int order, double discount = 0.75) {
  ff::TrainingConfig cfg;
  cfg.order = order;
  cfg.discount = discount;
  return ff::NGramModel::train({lines(text)}, cfg);
}

double prob(const ff::NGramModel& m, std::vector<std::string> history, const std::string& w) {
  std::vector<ff::Vocabulary::Id> ids;
  for (const auto& t : history) ids.push_back(m.vocabulary().id(t));
  return m.prob(ids, m.vocabulary().id(w));
}

double mass(const ff::NGramModel& m, std::span<const ff::Vocabulary::Id> ctx) {
  double s = 0.0;
  for (auto w : m.support()) s += m.prob(ctx, w);
  return s;
}

std::string repeat(const std::string& line, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += line + "\n";
  return out;
}

}  // namespace

TEST(NGram, UnigramHandValues) {
  // counts {a: 1, EOS: 1}; support {a, EOS, UNK}
  auto m = train("a", 1);
  const double floor = 1e-8;
  const double pa = (1 - floor) * (0.25 / 2 + 0.75 * (1.0 / 3));
  EXPECT_NEAR(prob(m, {}, "a"), pa, 1e-15);
  EXPECT_NEAR(m.prob({}, ff::Vocabulary::kEos), pa, 1e-15);
  EXPECT_NEAR(m.prob({}, ff::Vocabulary::kUnk), (1 - floor) * 0.25 + floor, 1e-15);
  EXPECT_NEAR(prob(m, {}, "a") + m.prob({}, ff::Vocabulary::kEos) + m.prob({}, ff::Vocabulary::kUnk), 1.0,
              1e-12);
}

TEST(NGram, BigramHandValueWithDefaultDiscount) {
  // c(a b) = 2 -> (2 - 0.75) / 2 + 0.75 / 2 * p1(b); continuation counts
  // {a: 1, b: 1, EOS: 1} give p1(b) = 0.25 / 3 + 0.75 / 4.
  auto m = train("a b\na b", 2);
  const double p1b = (1 - 1e-8) * (0.25 / 3 + 0.75 / 4);
  EXPECT_NEAR(prob(m, {"a"}, "b"), 0.625 + 0.375 * p1b, 1e-15);
  EXPECT_GT(prob(m, {"a"}, "b"), 0.7);
}

TEST(NGram, BigramNearMleWithSmallDiscount) {
  auto m = train("a b\na b", 2, 0.1);
  EXPECT_GT(prob(m, {"a"}, "b"), 0.9);
  EXPECT_GT(prob(m, {"a"}, "<unk>"), 0.0);
}

TEST(NGram, UnigramSumsToOneIncludingUnk) {
  auto m = train("a", 1);
  EXPECT_NEAR(mass(m, {}), 1.0, 1e-12);
}

TEST(NGram, NormalizationOverRandomContexts) {
  std::mt19937 rng(3);
  std::string corpus;
  std::uniform_int_distribution<int> len(1, 7), tok(0, 14);
  for (int i = 0; i < 300; ++i) {
    for (int j = len(rng); j > 0; --j) corpus += "t" + std::to_string(tok(rng)) + " ";
    corpus += "\n";
  }
  for (int order : {1, 2, 3, 4}) {
    auto m = train(corpus, order);
    std::uniform_int_distribution<ff::Vocabulary::Id> any(1, static_cast<ff::Vocabulary::Id>(m.vocabulary().size() - 1));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<ff::Vocabulary::Id> ctx(static_cast<std::size_t>(order - 1));
      for (auto& id : ctx) id = any(rng);
      ASSERT_NEAR(mass(m, ctx), 1.0, 1e-9) << "order " << order;
    }
  }
}

TEST(NGram, LogProbOrderingAndBounds) {
  auto m = train(repeat("a b", 100), 2);
  const double ab = m.log_prob({"a", "b"}), ba = m.log_prob({"b", "a"});
  EXPECT_GT(ab, ba);
  EXPECT_LE(ab, 0.0);
  EXPECT_TRUE(std::isfinite(m.log_prob({"zzz", "qqq"})));
}

TEST(NGram, ExtensionNeverIncreasesPrefixMass) {
  // log p(seq + w) without EOS equals log p(seq) without EOS plus log p(w|.)
  auto m = train(repeat("pour water to the cup", 20) + "heat the pan\n", 3);
  const ff::Sentence seq = {"pour", "water", "to", "the"};
  std::vector<ff::Vocabulary::Id> ids;
  double prefix = 0.0;
  for (const auto& t : seq) {
    const auto id = m.vocabulary().id(t);
    const double step = std::log(m.prob(ids, id));
    EXPECT_LE(step, 0.0);
    EXPECT_LE(prefix + step, prefix);
    prefix += step;
    ids.push_back(id);
  }
}

TEST(NGram, TrainingSentencesScoreFinite) {
  const std::string corpus = "fill the pot with water\nheat the pot on the stove\npour water to the cup\n";
  auto m = train(corpus, 3);
  for (const auto& s : lines(corpus).sentences) EXPECT_TRUE(std::isfinite(m.log_prob(s)));
}

TEST(NGram, FrameModeParsesCorpus) {
  auto lex = ff::RoleLexicon::default_lexicon();
  ff::TrainingConfig cfg;
  cfg.mode = ff::LinearizationMode::kFrame;
  auto docs = std::vector<ff::Document>{lines("pour the water into the cup\nhello there\npour me some milk")};
  auto seqs = ff::training_sequences(docs, ff::LinearizationMode::kFrame, &lex);
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0], (ff::Sentence{"pour", "water", "cup"}));
  auto m = ff::NGramModel::train(docs, cfg, &lex);
  EXPECT_EQ(m.mode(), ff::LinearizationMode::kFrame);
  EXPECT_GT(m.log_prob({"pour", "water", "cup"}), m.log_prob({"pour", "cup", "water"}));
}

TEST(NGram, EmptyTrainingSetErrors) {
  auto lex = ff::RoleLexicon::default_lexicon();
  ff::TrainingConfig cfg;
  cfg.mode = ff::LinearizationMode::kFrame;
  try {
    ff::NGramModel::train({lines("hello there\nnothing to see")}, cfg, &lex);
    FAIL();
  } catch (const ff::Error& e) {
    EXPECT_EQ(e.code(), ff::ErrorCode::kEmptyTrainingSet);
  }
  EXPECT_THROW(ff::NGramModel::train({lines("")}, ff::TrainingConfig{}), ff::Error);
  EXPECT_THROW(ff::NGramModel::train({lines("a")}, cfg, nullptr), ff::Error);
}

TEST(NGram, InvalidConfigRejected) {
  ff::TrainingConfig cfg;
  cfg.order = 0;
  EXPECT_THROW(train("a", 0), ff::Error);
  EXPECT_THROW(train("a", 2, 0.0), ff::Error);
  EXPECT_THROW(train("a", 2, 1.5), ff::Error);
}

TEST(NGram, SerializationIsDeterministicAndRoundTrips) {
  const std::string corpus = repeat("pour water to the cup", 5) + "heat the pan\nfill the pot with water\n";
  std::ostringstream a, b;
  train(corpus, 3).write(a);
  train(corpus, 3).write(b);
  EXPECT_EQ(a.str(), b.str());

  std::istringstream in(a.str());
  auto m = ff::NGramModel::read(in);
  const auto orig = train(corpus, 3);
  for (const ff::Sentence& s : {ff::Sentence{"pour", "water", "to", "the", "cup"}, ff::Sentence{"heat", "x"}}) {
    EXPECT_EQ(m.log_prob(s), orig.log_prob(s));
  }
  std::ostringstream c;
  m.write(c);
  EXPECT_EQ(c.str(), a.str());
}

TEST(NGram, VocabularyHashMismatchRejected) {
  std::ostringstream out;
  train("a b c", 2).write(out);
  const auto other = ff::Vocabulary::from_tokens(std::vector<std::string>{"a", "b"});
  std::istringstream in(out.str());
  try {
    ff::NGramModel::read(in, &other);
    FAIL();
  } catch (const ff::Error& e) {
    EXPECT_EQ(e.code(), ff::ErrorCode::kVocabularyMismatch);
  }

  std::string tampered = out.str();
  tampered.replace(tampered.find("\nc\n"), 3, "\nd\n");
  std::istringstream bad(tampered);
  EXPECT_THROW(ff::NGramModel::read(bad), ff::Error);
}
