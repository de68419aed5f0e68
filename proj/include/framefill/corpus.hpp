#pragma once

// Corpus ingestion, tokenization, vocabulary and sentence-level
// co-occurrence statistics.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "framefill/error.hpp"

namespace framefill {

using Token = std::string;
using Sentence = std::vector<Token>;

struct Document {
  std::string id;
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
};

enum class CorpusFormat { kLines, kRecipe };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  if (s == "lines") return CorpusFormat::kLines;
  if (s == "recipe") return CorpusFormat::kRecipe;
  return std::nullopt;
}

namespace detail {

inline bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace detail

// Lowercase, split on whitespace, trim leading/trailing ASCII punctuation from
// each token and drop tokens that end up empty. Interior punctuation
// ("don't", "1.5") is kept.
inline Sentence tokenize(std::string_view raw) {
  Sentence out;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && detail::is_space(raw[i])) ++i;
    std::size_t j = i;
    while (j < raw.size() && !detail::is_space(raw[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && detail::is_ascii_punct(raw[b])) ++b;
    while (e > b && detail::is_ascii_punct(raw[e - 1])) --e;
    if (b < e) {
      Token tok(raw.substr(b, e - b));
      for (char& c : tok) {
        if (static_cast<unsigned char>(c) < 0x80) {
          c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
      }
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

// Splits free text into raw sentence strings. A sentence ends at '.', '!' or
// '?' followed by whitespace or end of text, and at every line break, so
// unpunctuated ingredient lines stay separate sentences.
inline std::vector<std::string> split_recipe_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    out.push_back(current);
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n' || c == '\r') {
      flush();
      continue;
    }
    current.push_back(c);
    if (c == '.' || c == '!' || c == '?') {
      const bool boundary = i + 1 == text.size() || detail::is_space(text[i + 1]);
      if (boundary) flush();
    }
  }
  flush();
  return out;
}

// Tokenizes in-memory text according to `format`; blank sentences are dropped.
inline Document ingest_text(std::string_view text, CorpusFormat format, std::string id) {
  Document doc{std::move(id), {}};
  auto add = [&](std::string_view raw) {
    Sentence s = tokenize(raw);
    if (!s.empty()) doc.sentences.push_back(std::move(s));
  };
  if (format == CorpusFormat::kLines) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) nl = text.size();
      add(text.substr(start, nl - start));
      start = nl + 1;
    }
  } else {
    for (const auto& raw : split_recipe_sentences(text)) add(raw);
  }
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads and tokenizes one corpus file. A file yielding no sentences is not an
// error; a warning is appended to `warnings` (when given) and an empty
// document is returned.
inline Document ingest(const std::string& path, CorpusFormat format,
                       std::vector<std::string>* warnings = nullptr) {
  Document doc = ingest_text(read_file(path), format, path);
  if (doc.sentences.empty() && warnings != nullptr) {
    warnings->push_back("no sentences extracted from '" + path + "'");
  }
  return doc;
}

// Token <-> id bijection. Ids 0..3 are reserved for the special symbols;
// corpus tokens follow in lexicographic order so ids do not depend on
// ingestion order.
class Vocabulary {
 public:
  using Id = std::uint32_t;

  static constexpr Id kEmpty = 0;
  static constexpr Id kBos = 1;
  static constexpr Id kEos = 2;
  static constexpr Id kUnk = 3;
  static constexpr Id kFirstRegular = 4;

  static constexpr std::string_view kEmptySymbol = "<empty>";
  static constexpr std::string_view kBosSymbol = "<s>";
  static constexpr std::string_view kEosSymbol = "</s>";
  static constexpr std::string_view kUnkSymbol = "<unk>";

  Vocabulary() {
    for (auto sym : {kEmptySymbol, kBosSymbol, kEosSymbol, kUnkSymbol}) {
      ids_.emplace(std::string(sym), static_cast<Id>(tokens_.size()));
      tokens_.emplace_back(sym);
    }
  }

  // Builds from any token set; tokens that collide with a special symbol are
  // ignored.
  template <typename Range>
  static Vocabulary from_tokens(const Range& tokens) {
    std::vector<std::string> sorted(std::begin(tokens), std::end(tokens));
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Vocabulary v;
    for (auto& t : sorted) {
      if (v.ids_.count(t)) continue;
      v.ids_.emplace(t, static_cast<Id>(v.tokens_.size()));
      v.tokens_.push_back(std::move(t));
    }
    return v;
  }

  static Vocabulary from_sentences(const std::vector<Sentence>& sentences) {
    std::unordered_set<std::string> seen;
    for (const auto& s : sentences) seen.insert(s.begin(), s.end());
    return from_tokens(seen);
  }

  std::size_t size() const { return tokens_.size(); }

  // Unknown tokens map to kUnk.
  Id id(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnk : it->second;
  }

  bool contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

  const std::string& token(Id id) const { return tokens_.at(id); }

  const std::vector<std::string>& tokens() const { return tokens_; }

  // FNV-1a over the tokens in id order, 0xff separated.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : tokens_) {
      for (unsigned char c : t) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
      h ^= 0xff;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Id> ids_;
};

// Unigram occurrence counts and sentence-level pair counts. A pair counts the
// sentences that contain both (distinct) tokens at least once; a token never
// co-occurs with itself.
class CooccurStats {
 public:
  void add_sentence(const Sentence& sentence) {
    for (const auto& t : sentence) ++unigrams_[t];
    std::vector<std::string> distinct(sentence.begin(), sentence.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      for (std::size_t j = i + 1; j < distinct.size(); ++j) {
        ++pairs_[key(distinct[i], distinct[j])];
      }
    }
  }

  void add_document(const Document& doc) {
    for (const auto& s : doc.sentences) add_sentence(s);
  }

  static CooccurStats build(const std::vector<Document>& docs) {
    CooccurStats stats;
    for (const auto& d : docs) stats.add_document(d);
    return stats;
  }

  // Commutative and associative; building over shards then merging equals
  // building over the concatenation.
  void merge(const CooccurStats& other) {
    for (const auto& [t, c] : other.unigrams_) unigrams_[t] += c;
    for (const auto& [k, c] : other.pairs_) pairs_[k] += c;
  }

  std::uint64_t count(std::string_view x) const {
    auto it = unigrams_.find(std::string(x));
    return it == unigrams_.end() ? 0 : it->second;
  }

  std::uint64_t count(std::string_view x, std::string_view y) const {
    if (x == y) return 0;
    auto it = pairs_.find(x < y ? key(x, y) : key(y, x));
    return it == pairs_.end() ? 0 : it->second;
  }

  // count(x,y) / (count(x) * count(y)); zero whenever any factor is zero.
  double normalized(std::string_view x, std::string_view y) const {
    const auto cxy = count(x, y);
    if (cxy == 0) return 0.0;
    const auto cx = count(x), cy = count(y);
    if (cx == 0 || cy == 0) return 0.0;
    return static_cast<double>(cxy) / (static_cast<double>(cx) * static_cast<double>(cy));
  }

  std::size_t unigram_types() const { return unigrams_.size(); }
  std::size_t pair_types() const { return pairs_.size(); }

  // Sorted TSV: "# unigrams" section of token<TAB>count, then "# pairs"
  // section of tokenA<TAB>tokenB<TAB>count with tokenA < tokenB.
  void write_tsv(std::ostream& out) const {
    std::vector<std::pair<std::string, std::uint64_t>> uni(unigrams_.begin(), unigrams_.end());
    std::sort(uni.begin(), uni.end());
    out << "# unigrams\n";
    for (const auto& [t, c] : uni) out << t << '\t' << c << '\n';
    std::vector<std::pair<std::string, std::uint64_t>> pr(pairs_.begin(), pairs_.end());
    std::sort(pr.begin(), pr.end());
    out << "# pairs\n";
    for (const auto& [k, c] : pr) out << k << '\t' << c << '\n';
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
    write_tsv(out);
  }

  static CooccurStats read_tsv(std::istream& in, const std::string& origin = "<stream>") {
    CooccurStats stats;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (;;) {
        auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      auto bad = [&] {
        return Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) +
                                             ": malformed co-occurrence line");
      };
      std::uint64_t c = 0;
      try {
        std::size_t used = 0;
        c = std::stoull(fields.back(), &used);
        if (used != fields.back().size()) throw bad();
      } catch (const std::logic_error&) {
        throw bad();
      }
      if (fields.size() == 2) {
        stats.unigrams_[fields[0]] += c;
      } else if (fields.size() == 3 && fields[0] < fields[1]) {
        stats.pairs_[key(fields[0], fields[1])] += c;
      } else {
        throw bad();
      }
    }
    return stats;
  }

  static CooccurStats load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
    return read_tsv(in, path);
  }

  bool operator==(const CooccurStats& o) const {
    return unigrams_ == o.unigrams_ && pairs_ == o.pairs_;
  }

 private:
  static std::string key(std::string_view a, std::string_view b) {
    std::string k;
    k.reserve(a.size() + b.size() + 1);
    k.append(a).push_back('\t');
    k.append(b);
    return k;
  }

  std::unordered_map<std::string, std::uint64_t> unigrams_;
  // "a\tb" with a < b; tokens never contain whitespace.
  std::unordered_map<std::string, std::uint64_t> pairs_;
};

}  // namespace framefill
