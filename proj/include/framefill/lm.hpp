#pragma once

// Count-based n-gram language model. Sequence probability is the chain-rule
// product of per-token conditionals, each estimated by interpolated absolute
// discounting with Kneser-Ney continuation counts at the lower orders.
//
// Sequences are padded with (order - 1) BOS symbols and one EOS. The
// conditional distribution for any context is proper over the support
// {corpus tokens} + {EOS, UNK}: at each level
//
//   p_k(w | h) = max(c_k(h w) - D, 0) / C_k(h) + D * T_k(h) / C_k(h) * p_{k-1}(w | h')
//
// where C_k(h) is the count mass after h and T_k(h) the number of distinct
// successors. Unseen contexts back off entirely. The recursion bottoms out in
// a uniform distribution over the support, and the unigram level reserves
// `unk_floor` of its mass for UNK.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "framefill/corpus.hpp"
#include "framefill/error.hpp"
#include "framefill/frames.hpp"

namespace framefill {

struct TrainingConfig {
  int order = 3;
  LinearizationMode mode = LinearizationMode::kSentence;
  double discount = 0.75;
  double unk_floor = 1e-8;

  void validate() const {
    if (order < 1) throw Error(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "discount must lie in (0, 1]");
    }
    if (!(unk_floor >= 0.0 && unk_floor < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "unk floor must lie in [0, 1)");
    }
  }
};

// Turns a corpus into LM training sequences. Sentence mode uses sentences as
// they are. Frame mode parses each sentence and keeps the frame-mode
// linearization of every complete frame; sentences the parser rejects are
// skipped.
inline std::vector<Sentence> training_sequences(const std::vector<Document>& docs,
                                                LinearizationMode mode,
                                                const RoleLexicon* lex) {
  std::vector<Sentence> out;
  if (mode == LinearizationMode::kSentence) {
    for (const auto& d : docs) out.insert(out.end(), d.sentences.begin(), d.sentences.end());
    return out;
  }
  if (lex == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "frame-mode training requires a role lexicon");
  }
  for (const auto& d : docs) {
    for (const auto& s : d.sentences) {
      std::vector<VerbFrame> frames;
      try {
        frames = parse(s, *lex);
      } catch (const Error&) {
        continue;
      }
      for (const auto& f : frames) {
        if (f.complete()) out.push_back(linearize(f, LinearizationMode::kFrame, *lex));
      }
    }
  }
  return out;
}

class NGramModel {
 public:
  using Id = Vocabulary::Id;
  using Gram = std::vector<Id>;

  static constexpr std::string_view kMagic = "framefill-ngram";
  static constexpr int kFormatVersion = 1;
  static constexpr std::string_view kSmoothing = "interpolated-backoff";

  static NGramModel train(const std::vector<Document>& docs, const TrainingConfig& cfg,
                          const RoleLexicon* lex = nullptr) {
    cfg.validate();
    auto seqs = training_sequences(docs, cfg.mode, lex);
    if (seqs.empty()) {
      throw Error(ErrorCode::kEmptyTrainingSet,
                  std::string("no ") + std::string(to_string(cfg.mode)) +
                      "-mode training sequences in corpus");
    }
    return from_sequences(seqs, cfg);
  }

  static NGramModel from_sequences(const std::vector<Sentence>& seqs, const TrainingConfig& cfg) {
    cfg.validate();
    std::size_t non_empty = 0;
    for (const auto& s : seqs) non_empty += !s.empty();
    if (non_empty == 0) throw Error(ErrorCode::kEmptyTrainingSet, "no training sequences");

    NGramModel m;
    m.cfg_ = cfg;
    m.vocab_ = Vocabulary::from_sentences(seqs);
    const std::size_t n = static_cast<std::size_t>(cfg.order);
    for (const auto& s : seqs) {
      if (s.empty()) continue;
      Gram padded(n - 1, Vocabulary::kBos);
      for (const auto& t : s) padded.push_back(m.vocab_.id(t));
      padded.push_back(Vocabulary::kEos);
      for (std::size_t i = n - 1; i < padded.size(); ++i) {
        ++m.top_counts_[Gram(padded.begin() + static_cast<std::ptrdiff_t>(i + 1 - n),
                             padded.begin() + static_cast<std::ptrdiff_t>(i + 1))];
      }
    }
    m.build_levels();
    return m;
  }

  const TrainingConfig& config() const { return cfg_; }
  int order() const { return cfg_.order; }
  LinearizationMode mode() const { return cfg_.mode; }
  const Vocabulary& vocabulary() const { return vocab_; }

  // Every token the model can predict: corpus tokens, EOS and UNK.
  std::vector<Id> support() const {
    std::vector<Id> out;
    for (Id i = 0; i < vocab_.size(); ++i) {
      if (i != Vocabulary::kEmpty && i != Vocabulary::kBos) out.push_back(i);
    }
    return out;
  }

  // p(word | history). Only the last (order - 1) ids of `history` are used;
  // shorter histories are left-padded with BOS.
  double prob(std::span<const Id> history, Id word) const {
    const std::size_t n = static_cast<std::size_t>(cfg_.order);
    Gram ctx(n - 1, Vocabulary::kBos);
    const std::size_t take = std::min(history.size(), n - 1);
    std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
              ctx.end() - static_cast<std::ptrdiff_t>(take));

    const double support_size = static_cast<double>(vocab_.size() - 2);
    double p = 1.0 / support_size;
    Gram key;
    for (std::size_t k = 1; k <= n; ++k) {
      key.assign(ctx.end() - static_cast<std::ptrdiff_t>(k - 1), ctx.end());
      auto ctx_it = levels_[k - 1].contexts.find(key);
      if (ctx_it != levels_[k - 1].contexts.end()) {
        const ContextMass& cm = ctx_it->second;
        key.push_back(word);
        double c = 0.0;
        auto g = levels_[k - 1].grams.find(key);
        if (g != levels_[k - 1].grams.end()) c = static_cast<double>(g->second);
        const double total = static_cast<double>(cm.total);
        const double d = cfg_.discount;
        p = std::max(c - d, 0.0) / total + d * static_cast<double>(cm.types) / total * p;
      }
      if (k == 1) {
        p = (1.0 - cfg_.unk_floor) * p + (word == Vocabulary::kUnk ? cfg_.unk_floor : 0.0);
      }
    }
    return p;
  }

  // Natural-log probability of the sequence followed by EOS. OOV tokens map
  // to UNK; the result is finite and <= 0.
  double log_prob(const Sentence& seq) const {
    Gram ids;
    ids.reserve(seq.size() + 1);
    double lp = 0.0;
    for (const auto& t : seq) {
      const Id w = vocab_.id(t);
      lp += std::log(prob(ids, w));
      ids.push_back(w);
    }
    lp += std::log(prob(ids, Vocabulary::kEos));
    return lp;
  }

  // Text artifact: header (format version, order, mode, smoothing
  // parameters, vocabulary hash), the vocabulary in id order, then the
  // top-order n-gram counts. Lower-order statistics are rebuilt on load.
  void write(std::ostream& out) const {
    char buf[64];
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "order " << cfg_.order << '\n';
    out << "mode " << to_string(cfg_.mode) << '\n';
    out << "smoothing " << kSmoothing << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", cfg_.discount);
    out << "discount " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", cfg_.unk_floor);
    out << "unk_floor " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%016" PRIx64, vocab_.hash());
    out << "vocab_hash " << buf << '\n';
    out << "vocab " << vocab_.size() << '\n';
    for (const auto& t : vocab_.tokens()) out << t << '\n';
    out << "ngrams " << top_counts_.size() << '\n';
    for (const auto& [gram, c] : top_counts_) {
      for (std::size_t i = 0; i < gram.size(); ++i) out << (i ? " " : "") << gram[i];
      out << '\t' << c << '\n';
    }
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write model '" + path + "'");
    write(out);
  }

  // When `expected` is given, its hash must match the stored vocabulary hash.
  static NGramModel read(std::istream& in, const Vocabulary* expected = nullptr,
                         const std::string& origin = "<stream>") {
    auto fail = [&](const std::string& what) {
      return Error(ErrorCode::kFormat, origin + ": " + what);
    };
    auto expect_key = [&](std::string_view key) {
      std::string k;
      if (!(in >> k) || k != key) throw fail("expected '" + std::string(key) + "'");
    };
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMagic) throw fail("not an n-gram model artifact");
    if (version != kFormatVersion) throw fail("unsupported format version " + std::to_string(version));

    TrainingConfig cfg;
    std::string mode, smoothing, hash_hex;
    expect_key("order");
    in >> cfg.order;
    expect_key("mode");
    in >> mode;
    expect_key("smoothing");
    in >> smoothing;
    expect_key("discount");
    in >> cfg.discount;
    expect_key("unk_floor");
    in >> cfg.unk_floor;
    expect_key("vocab_hash");
    in >> hash_hex;
    if (!in) throw fail("truncated header");
    auto m = parse_linearization_mode(mode);
    if (!m) throw fail("unknown mode '" + mode + "'");
    cfg.mode = *m;
    if (smoothing != kSmoothing) throw fail("unknown smoothing '" + smoothing + "'");
    cfg.validate();

    std::size_t vsize = 0;
    expect_key("vocab");
    in >> vsize;
    std::string line;
    std::getline(in, line);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < vsize; ++i) {
      if (!std::getline(in, line)) throw fail("truncated vocabulary");
      tokens.push_back(line);
    }
    if (tokens.size() < Vocabulary::kFirstRegular) throw fail("vocabulary lacks special symbols");
    NGramModel model;
    model.cfg_ = cfg;
    model.vocab_ = Vocabulary::from_tokens(
        std::vector<std::string>(tokens.begin() + Vocabulary::kFirstRegular, tokens.end()));
    if (model.vocab_.tokens() != tokens) throw fail("vocabulary is not in canonical order");

    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, model.vocab_.hash());
    if (hash_hex != buf) throw fail("stored vocabulary hash does not match vocabulary");
    if (expected != nullptr && expected->hash() != model.vocab_.hash()) {
      throw Error(ErrorCode::kVocabularyMismatch,
                  origin + ": model vocabulary hash " + hash_hex + " differs from supplied vocabulary");
    }

    std::size_t ngrams = 0;
    expect_key("ngrams");
    in >> ngrams;
    for (std::size_t i = 0; i < ngrams; ++i) {
      Gram g(static_cast<std::size_t>(cfg.order));
      for (auto& id : g) {
        if (!(in >> id) || id >= model.vocab_.size()) throw fail("bad n-gram entry");
      }
      std::uint64_t c = 0;
      if (!(in >> c) || c == 0) throw fail("bad n-gram count");
      model.top_counts_[g] = c;
    }
    model.build_levels();
    return model;
  }

  static NGramModel load(const std::string& path, const Vocabulary* expected = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read model '" + path + "'");
    return read(in, expected, path);
  }

 private:
  struct ContextMass {
    std::uint64_t total = 0;
    std::uint64_t types = 0;
  };

  struct Level {
    // Raw counts at the top order, continuation counts below it.
    std::map<Gram, std::uint64_t> grams;
    std::map<Gram, ContextMass> contexts;
  };

  void build_levels() {
    const std::size_t n = static_cast<std::size_t>(cfg_.order);
    levels_.assign(n, Level{});
    levels_[n - 1].grams = top_counts_;
    for (std::size_t k = n - 1; k >= 1; --k) {
      // Each distinct (k+1)-gram contributes one left extension to its suffix.
      for (const auto& [g, c] : levels_[k].grams) {
        ++levels_[k - 1].grams[Gram(g.begin() + 1, g.end())];
      }
    }
    for (auto& level : levels_) {
      for (const auto& [g, c] : level.grams) {
        auto& cm = level.contexts[Gram(g.begin(), g.end() - 1)];
        cm.total += c;
        ++cm.types;
      }
    }
  }

  TrainingConfig cfg_;
  Vocabulary vocab_;
  std::map<Gram, std::uint64_t> top_counts_;
  // levels_[k - 1] holds the order-k statistics.
  std::vector<Level> levels_;
};

}  // namespace framefill
