#pragma once

// Two-argument verb frames, the role lexicon that defines them, a rule-based
// imperative parser, and frame linearization.

#include <algorithm>
#include <compare>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "framefill/corpus.hpp"
#include "framefill/error.hpp"
#include "framefill/inventory.hpp"
#include "json.hpp"

namespace framefill {

// (predicate, role1, arg1, role2, arg2); an argument without a value is EMPTY.
struct VerbFrame {
  std::string predicate;
  std::string role1;
  std::optional<std::string> arg1;
  std::string role2;
  std::optional<std::string> arg2;

  bool complete() const { return arg1.has_value() && arg2.has_value(); }

  bool operator==(const VerbFrame&) const = default;
  auto operator<=>(const VerbFrame&) const = default;
};

enum class MissingRole { kNone, kRole1, kRole2 };

enum class LinearizationMode { kFrame, kSentence };

inline std::string_view to_string(LinearizationMode m) {
  return m == LinearizationMode::kFrame ? "frame" : "sentence";
}

inline std::optional<LinearizationMode> parse_linearization_mode(std::string_view s) {
  if (s == "frame") return LinearizationMode::kFrame;
  if (s == "sentence") return LinearizationMode::kSentence;
  return std::nullopt;
}

inline std::string describe(const VerbFrame& f) {
  auto arg = [](const std::optional<std::string>& a) { return a ? *a : std::string("?"); };
  return "(" + f.predicate + ", " + f.role1 + ": " + arg(f.arg1) + ", " + f.role2 + ": " +
         arg(f.arg2) + ")";
}

inline nlohmann::json to_json(const VerbFrame& f) {
  nlohmann::json j;
  j["v"] = f.predicate;
  j["r1"] = f.role1;
  j["a1"] = f.arg1 ? nlohmann::json(*f.arg1) : nlohmann::json(nullptr);
  j["r2"] = f.role2;
  j["a2"] = f.arg2 ? nlohmann::json(*f.arg2) : nlohmann::json(nullptr);
  return j;
}

inline VerbFrame frame_from_json(const nlohmann::json& j) {
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::kFormat, std::string("frame field \"") + key + "\" must be a string");
    }
    return j[key].get<std::string>();
  };
  auto arg = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_string()) {
      throw Error(ErrorCode::kFormat, std::string("frame field \"") + key + "\" must be string or null");
    }
    return j[key].get<std::string>();
  };
  return {str("v"), str("r1"), arg("a1"), str("r2"), arg("a2")};
}

struct LexiconEntry {
  std::string verb;
  std::string role1;
  std::string role2;
  // Prepositions that introduce the role2 argument.
  std::vector<std::string> prepositions;
  // Whitespace-separated template with {a1} and {a2} each exactly once.
  std::string sentence_template;
};

// The action set and its per-verb role inventory.
class RoleLexicon {
 public:
  static constexpr std::string_view kSlot1 = "{a1}";
  static constexpr std::string_view kSlot2 = "{a2}";

  void add(LexiconEntry entry) {
    if (entry.verb.empty() || entry.role1.empty() || entry.role2.empty()) {
      throw Error(ErrorCode::kFormat, "lexicon entry needs a verb and two role labels");
    }
    const Sentence tmpl = template_tokens(entry.sentence_template);
    if (std::count(tmpl.begin(), tmpl.end(), kSlot1) != 1 ||
        std::count(tmpl.begin(), tmpl.end(), kSlot2) != 1) {
      throw Error(ErrorCode::kFormat, "template for '" + entry.verb +
                                          "' must contain {a1} and {a2} exactly once");
    }
    entries_[entry.verb] = std::move(entry);
  }

  const LexiconEntry* find(std::string_view verb) const {
    auto it = entries_.find(std::string(verb));
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(std::string_view verb) const { return find(verb) != nullptr; }

  const LexiconEntry& at(std::string_view verb) const {
    const LexiconEntry* e = find(verb);
    if (e == nullptr) throw Error(ErrorCode::kNoPredicate, "'" + std::string(verb) + "' is not in the lexicon");
    return *e;
  }

  std::vector<std::string> verbs() const {
    std::vector<std::string> out;
    for (const auto& [v, e] : entries_) out.push_back(v);
    return out;
  }

  std::size_t size() const { return entries_.size(); }

  // Complete-slot frame shell for `verb` with both arguments EMPTY.
  VerbFrame shell(std::string_view verb) const {
    const auto& e = at(verb);
    return {e.verb, e.role1, std::nullopt, e.role2, std::nullopt};
  }

  // TSV: verb<TAB>role1<TAB>role2<TAB>prep1,prep2,...<TAB>template
  static RoleLexicon read_tsv(std::istream& in, const std::string& origin = "<stream>") {
    RoleLexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> f;
      std::size_t start = 0;
      for (;;) {
        auto tab = line.find('\t', start);
        f.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (f.size() != 5) {
        throw Error(ErrorCode::kFormat,
                    origin + ":" + std::to_string(lineno) + ": expected 5 tab-separated fields");
      }
      LexiconEntry e{f[0], f[1], f[2], {}, f[4]};
      std::stringstream preps(f[3]);
      std::string p;
      while (std::getline(preps, p, ',')) {
        if (!p.empty()) e.prepositions.push_back(p);
      }
      try {
        lex.add(std::move(e));
      } catch (const Error& err) {
        throw Error(ErrorCode::kFormat, origin + ":" + std::to_string(lineno) + ": " + err.what());
      }
    }
    return lex;
  }

  static RoleLexicon load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read lexicon '" + path + "'");
    return read_tsv(in, path);
  }

  void write_tsv(std::ostream& out) const {
    for (const auto& [v, e] : entries_) {
      out << e.verb << '\t' << e.role1 << '\t' << e.role2 << '\t';
      for (std::size_t i = 0; i < e.prepositions.size(); ++i) {
        if (i) out << ',';
        out << e.prepositions[i];
      }
      out << '\t' << e.sentence_template << '\n';
    }
  }

  // The eleven kitchen actions evaluated in the original experiments.
  static RoleLexicon default_lexicon() {
    RoleLexicon lex;
    lex.add({"blend", "Theme", "Destination", {"in", "into", "with"}, "blend {a1} in the {a2}"});
    lex.add({"brush", "Theme", "Instrument", {"with", "using"}, "brush {a1} with the {a2}"});
    lex.add({"dip", "Theme", "Destination", {"in", "into"}, "dip {a1} in the {a2}"});
    lex.add({"dump", "Theme", "Destination", {"into", "in", "onto", "on"}, "dump {a1} into the {a2}"});
    lex.add({"fill", "Destination", "Theme", {"with"}, "fill {a1} with {a2}"});
    lex.add({"fry", "Theme", "Instrument", {"in", "on", "with"}, "fry {a1} in the {a2}"});
    lex.add({"heat", "Theme", "Instrument", {"in", "on", "with"}, "heat {a1} in the {a2}"});
    lex.add({"pour", "Theme", "Destination", {"to", "into", "in", "onto", "on", "over"},
             "pour {a1} to the {a2}"});
    lex.add({"rub", "Theme", "Instrument", {"with", "using"}, "rub {a1} with the {a2}"});
    lex.add({"season", "Theme", "Instrument", {"with"}, "season {a1} with {a2}"});
    lex.add({"sprinkle", "Theme", "Destination", {"on", "onto", "over", "into"},
             "sprinkle {a1} on the {a2}"});
    return lex;
  }

  static Sentence template_tokens(std::string_view tmpl) {
    Sentence out;
    std::istringstream in{std::string(tmpl)};
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
  }

 private:
  std::map<std::string, LexiconEntry> entries_;
};

namespace detail {

// Determiners, pronouns, quantifiers and particles skipped inside argument
// chunks.
inline bool is_function_word(std::string_view t) {
  static const std::set<std::string, std::less<>> words = {
      "a",    "an",    "the",  "me",    "us",    "him",   "her",  "them",  "it",
      "you",  "some",  "any",  "all",   "this",  "that",  "these", "those", "my",
      "your", "his",   "its",  "our",   "their", "more",  "few",  "several", "much",
      "many", "each",  "every", "please", "up",  "out",   "down", "off",   "another",
      "other", "both", "half", "little", "whole"};
  return words.count(t) > 0;
}

// Tokens that end an argument chunk regardless of the verb.
inline bool is_chunk_boundary(std::string_view t) {
  static const std::set<std::string, std::less<>> words = {
      "in",    "into",  "to",    "on",     "onto",  "with",  "over",  "for",   "from",
      "at",    "by",    "under", "inside", "until", "about", "using", "and",
      "then",  "or",    "but",   "while",  "before", "after", "through", "across",
      "around", "between", "so",  "if",    "when"};
  return words.count(t) > 0;
}

}  // namespace detail

// Parses an instruction into frames, one per lexicon verb occurrence, in order.
//
// arg1 is the head (last non-function token) of the chunk after the verb; a
// chunk ends at a preposition, conjunction, the next lexicon verb, or the end.
// "a cup of water" continues past "of", so its head is "water". arg2 is the
// head of the chunk after the first preposition registered for the verb, or
// EMPTY when there is none.
inline std::vector<VerbFrame> parse(const Sentence& instruction, const RoleLexicon& lex) {
  if (instruction.empty()) throw Error(ErrorCode::kNoPredicate, "empty instruction");

  std::vector<std::size_t> verb_positions;
  for (std::size_t i = 0; i < instruction.size(); ++i) {
    if (lex.contains(instruction[i])) verb_positions.push_back(i);
  }
  if (verb_positions.empty()) {
    std::string text;
    for (const auto& t : instruction) text += (text.empty() ? "" : " ") + t;
    throw Error(ErrorCode::kNoPredicate, "no known action in \"" + text + "\"");
  }

  // Head of the chunk starting at `pos`, stopping before `end`; advances pos.
  auto chunk_head = [&](std::size_t& pos, std::size_t end) -> std::optional<std::string> {
    std::optional<std::string> head;
    while (pos < end) {
      const auto& t = instruction[pos];
      if (t == "of") {
        ++pos;
        continue;
      }
      if (detail::is_chunk_boundary(t)) break;
      if (!detail::is_function_word(t)) head = t;
      ++pos;
    }
    return head;
  };

  std::vector<VerbFrame> frames;
  for (std::size_t n = 0; n < verb_positions.size(); ++n) {
    const std::size_t vpos = verb_positions[n];
    const std::size_t end = n + 1 < verb_positions.size() ? verb_positions[n + 1] : instruction.size();
    const LexiconEntry& e = lex.at(instruction[vpos]);
    VerbFrame f = lex.shell(e.verb);

    std::size_t pos = vpos + 1;
    f.arg1 = chunk_head(pos, end);
    if (!f.arg1) {
      throw Error(ErrorCode::kMalformedFrame, "'" + e.verb + "' has no object");
    }
    while (pos < end) {
      const auto& t = instruction[pos++];
      if (std::find(e.prepositions.begin(), e.prepositions.end(), t) != e.prepositions.end()) {
        f.arg2 = chunk_head(pos, end);
        break;
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

inline MissingRole missing_role(const VerbFrame& f) {
  if (!f.arg1 && !f.arg2) {
    throw Error(ErrorCode::kBothMissing, describe(f) + " has no arguments");
  }
  if (!f.arg1) return MissingRole::kRole1;
  if (!f.arg2) return MissingRole::kRole2;
  return MissingRole::kNone;
}

// frame mode: [v, a1, a2]; sentence mode: the verb's template instantiated.
inline Sentence linearize(const VerbFrame& f, LinearizationMode mode, const RoleLexicon& lex) {
  if (!f.complete()) {
    throw Error(ErrorCode::kIncompleteFrame, "cannot linearize " + describe(f));
  }
  if (mode == LinearizationMode::kFrame) return {f.predicate, *f.arg1, *f.arg2};
  Sentence out;
  for (auto& t : RoleLexicon::template_tokens(lex.at(f.predicate).sentence_template)) {
    if (t == RoleLexicon::kSlot1) {
      out.push_back(*f.arg1);
    } else if (t == RoleLexicon::kSlot2) {
      out.push_back(*f.arg2);
    } else {
      out.push_back(std::move(t));
    }
  }
  return out;
}

// One complete frame per distinct inventory object, substituted into the
// missing slot, in inventory order.
inline std::vector<VerbFrame> candidates(const VerbFrame& f, const ObjectInventory& inv) {
  const MissingRole missing = missing_role(f);
  if (missing == MissingRole::kNone) {
    throw Error(ErrorCode::kPrecondition, describe(f) + " is already complete");
  }
  if (inv.empty()) throw Error(ErrorCode::kEmptyInventory, "no objects to choose from");
  std::vector<VerbFrame> out;
  for (auto& label : inv.distinct_heads()) {
    VerbFrame c = f;
    (missing == MissingRole::kRole1 ? c.arg1 : c.arg2) = std::move(label);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace framefill
