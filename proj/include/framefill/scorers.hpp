#pragma once

// Plausibility scorers g(f) over complete verb frames, and argmax selection.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "framefill/corpus.hpp"
#include "framefill/error.hpp"
#include "framefill/frames.hpp"
#include "framefill/lm.hpp"
#include "framefill/rng.hpp"

namespace framefill {

namespace detail {

inline void require_complete(const VerbFrame& f) {
  if (!f.complete()) throw Error(ErrorCode::kIncompleteFrame, "cannot score " + describe(f));
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace detail

// A named plausibility function over complete frames; higher is more
// plausible. Implementations are immutable and safe to share across threads.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;
  virtual bool deterministic() const { return true; }

  virtual double score(const VerbFrame& f) const = 0;

  // Scores a candidate list. `seed` is consumed by stochastic scorers only,
  // so deterministic scorers return score(f) for every frame.
  virtual std::vector<double> score_all(std::span<const VerbFrame> frames,
                                        std::uint64_t seed) const {
    (void)seed;
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(score(f));
    return out;
  }
};

// --- language model --------------------------------------------------------

inline double score_lm(const NGramModel& model, const VerbFrame& f, LinearizationMode mode,
                       const RoleLexicon& lex) {
  detail::require_complete(f);
  if (model.mode() != mode) {
    throw Error(ErrorCode::kModeMismatch, "model was trained in " +
                                              std::string(to_string(model.mode())) + " mode, not " +
                                              std::string(to_string(mode)));
  }
  return model.log_prob(linearize(f, mode, lex));
}

class LmScorer : public Scorer {
 public:
  LmScorer(std::shared_ptr<const NGramModel> model, RoleLexicon lex)
      : model_(std::move(model)), lex_(std::move(lex)) {}

  std::string name() const override {
    return std::string("lm-") + std::string(to_string(model_->mode()));
  }
  double score(const VerbFrame& f) const override {
    return score_lm(*model_, f, model_->mode(), lex_);
  }

  const NGramModel& model() const { return *model_; }

 private:
  std::shared_ptr<const NGramModel> model_;
  RoleLexicon lex_;
};

// --- co-occurrence ----------------------------------------------------------

// cooccur(v, a2) + cooccur(a1, a2) with cooccur(x, y) = count(x,y) / (count(x) count(y)).
inline double score_cooccur(const CooccurStats& stats, const VerbFrame& f) {
  detail::require_complete(f);
  return stats.normalized(f.predicate, *f.arg2) + stats.normalized(*f.arg1, *f.arg2);
}

class CooccurScorer : public Scorer {
 public:
  explicit CooccurScorer(std::shared_ptr<const CooccurStats> stats) : stats_(std::move(stats)) {}

  std::string name() const override { return "cooccur"; }
  double score(const VerbFrame& f) const override { return score_cooccur(*stats_, f); }

 private:
  std::shared_ptr<const CooccurStats> stats_;
};

// --- embeddings --------------------------------------------------------------

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  void add(const std::string& token, std::span<const double> vec) {
    if (dim_ == 0) dim_ = vec.size();
    if (vec.empty() || vec.size() != dim_) {
      throw Error(ErrorCode::kFormat, "embedding for '" + token + "' has dimension " +
                                          std::to_string(vec.size()) + ", expected " +
                                          std::to_string(dim_));
    }
    auto [it, inserted] = index_.emplace(token, data_.size() / dim_);
    if (!inserted) {
      std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
      return;
    }
    data_.insert(data_.end(), vec.begin(), vec.end());
  }

  // nullptr-equivalent empty span for OOV tokens.
  std::span<const double> find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return {};
    return {data_.data() + it->second * dim_, dim_};
  }

  // Adds `offset` to every vector.
  void translate(std::span<const double> offset) {
    if (offset.size() != dim_) throw Error(ErrorCode::kInvalidArgument, "offset dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += offset[i % dim_];
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [t, row] : index_) fn(t, std::span<const double>(data_.data() + row * dim_, dim_));
  }

  // GloVe-style text: "token v1 ... vd" per line. A leading word2vec
  // "count dim" header line is accepted and skipped.
  static EmbeddingTable read(std::istream& in, const std::string& origin = "<stream>") {
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> vec;
    while (std::getline(in, line)) {
      ++lineno;
      auto fields = detail::split_ws(line);
      if (fields.empty()) continue;
      if (lineno == 1 && fields.size() == 2 &&
          fields[0].find_first_not_of("0123456789") == std::string::npos &&
          fields[1].find_first_not_of("0123456789") == std::string::npos) {
        continue;
      }
      if (fields.size() < 2) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": no vector");
      }
      vec.clear();
      for (std::size_t i = 1; i < fields.size(); ++i) {
        char* end = nullptr;
        const double v = std::strtod(fields[i].c_str(), &end);
        if (end != fields[i].c_str() + fields[i].size() || !std::isfinite(v)) {
          throw Error(ErrorCode::kFormat,
                      origin + ":" + std::to_string(lineno) + ": bad component '" + fields[i] + "'");
        }
        vec.push_back(v);
      }
      try {
        table.add(fields[0], vec);
      } catch (const Error& e) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    return table;
  }

  static EmbeddingTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read embeddings '" + path + "'");
    return read(in, path);
  }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// -(dist(v, a2) + dist(a1, a2)); a frame with any OOV token scores -inf.
inline double score_embedding(const EmbeddingTable& emb, const VerbFrame& f) {
  detail::require_complete(f);
  const auto v = emb.find(f.predicate), a1 = emb.find(*f.arg1), a2 = emb.find(*f.arg2);
  if (v.empty() || a1.empty() || a2.empty()) return -std::numeric_limits<double>::infinity();
  return -(euclidean(v, a2) + euclidean(a1, a2));
}

class EmbeddingScorer : public Scorer {
 public:
  explicit EmbeddingScorer(std::shared_ptr<const EmbeddingTable> emb) : emb_(std::move(emb)) {}

  std::string name() const override { return "embedding"; }
  double score(const VerbFrame& f) const override { return score_embedding(*emb_, f); }

 private:
  std::shared_ptr<const EmbeddingTable> emb_;
};

// --- relatedness table -------------------------------------------------------

// Symmetric token-pair relatedness in [-1, 1]; missing pairs read as 0.
class RelatednessTable {
 public:
  void set(const std::string& a, const std::string& b, double score) {
    if (!(score >= -1.0 && score <= 1.0)) {
      throw Error(ErrorCode::kFormat, "relatedness(" + a + ", " + b + ") outside [-1, 1]");
    }
    scores_[key(a, b)] = score;
  }

  double get(std::string_view a, std::string_view b) const {
    auto it = scores_.find(key(a, b));
    return it == scores_.end() ? 0.0 : it->second;
  }

  std::size_t size() const { return scores_.size(); }

  // TSV: tokenA<TAB>tokenB<TAB>score
  static RelatednessTable read(std::istream& in, const std::string& origin = "<stream>") {
    RelatednessTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": expected 3 fields");
      }
      const std::string num = line.substr(t2 + 1);
      char* end = nullptr;
      const double v = std::strtod(num.c_str(), &end);
      if (num.empty() || end != num.c_str() + num.size()) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": bad score");
      }
      try {
        table.set(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), v);
      } catch (const Error& e) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    return table;
  }

  static RelatednessTable load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read relatedness table '" + path + "'");
    return read(in, path);
  }

 private:
  static std::string key(std::string_view a, std::string_view b) {
    if (b < a) std::swap(a, b);
    std::string k(a);
    k.push_back('\t');
    k.append(b);
    return k;
  }

  std::unordered_map<std::string, double> scores_;
};

// rel(v, a2) + rel(a1, a2)
inline double score_relatedness(const RelatednessTable& rel, const VerbFrame& f) {
  detail::require_complete(f);
  return rel.get(f.predicate, *f.arg2) + rel.get(*f.arg1, *f.arg2);
}

class RelatednessScorer : public Scorer {
 public:
  explicit RelatednessScorer(std::shared_ptr<const RelatednessTable> rel) : rel_(std::move(rel)) {}

  std::string name() const override { return "relatedness"; }
  double score(const VerbFrame& f) const override { return score_relatedness(*rel_, f); }

 private:
  std::shared_ptr<const RelatednessTable> rel_;
};

// --- uniform random ----------------------------------------------------------

inline double score_random(RandomStream& stream, const VerbFrame& f) {
  detail::require_complete(f);
  return stream.uniform();
}

// Uniform(0, 1) scores. score_all draws one value per candidate from a stream
// seeded with the per-scenario seed; score() seeds from the scorer seed and
// the frame contents, so it is repeatable but not independent across calls.
class RandomScorer : public Scorer {
 public:
  explicit RandomScorer(std::uint64_t seed = 0) : seed_(seed) {}

  std::string name() const override { return "random"; }
  bool deterministic() const override { return false; }

  double score(const VerbFrame& f) const override {
    std::uint64_t h = seed_;
    for (const auto* s : {&f.predicate, &*f.arg1, &*f.arg2}) {
      for (unsigned char c : *s) h = mix64(h ^ c);
      h = mix64(h ^ 0xff);
    }
    RandomStream stream(h);
    return score_random(stream, f);
  }

  std::vector<double> score_all(std::span<const VerbFrame> frames, std::uint64_t seed) const override {
    RandomStream stream(derive_seed(seed_, seed));
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(score_random(stream, f));
    return out;
  }

 private:
  std::uint64_t seed_;
};

// --- selection ----------------------------------------------------------------

// Index of the highest score. Ties go to the lexicographically smallest
// (arg1, arg2), then to the lowest index. NaN ranks below everything.
inline std::size_t argmax_frame(std::span<const VerbFrame> frames, std::span<const double> scores) {
  if (frames.empty()) throw Error(ErrorCode::kEmptyCandidateList, "no candidates to rank");
  if (frames.size() != scores.size()) {
    throw Error(ErrorCode::kInvalidArgument, "score count does not match candidate count");
  }
  auto value = [&](std::size_t i) {
    return std::isnan(scores[i]) ? -std::numeric_limits<double>::infinity() : scores[i];
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double si = value(i), sb = value(best);
    if (si > sb) {
      best = i;
    } else if (si == sb && std::tie(frames[i].arg1, frames[i].arg2) <
                               std::tie(frames[best].arg1, frames[best].arg2)) {
      best = i;
    }
  }
  return best;
}

inline std::size_t rank(const Scorer& scorer, std::span<const VerbFrame> frames,
                        std::uint64_t seed = 0) {
  if (frames.empty()) throw Error(ErrorCode::kEmptyCandidateList, "no candidates to rank");
  for (const auto& f : frames) detail::require_complete(f);
  const auto scores = scorer.score_all(frames, seed);
  return argmax_frame(frames, scores);
}

}  // namespace framefill
