#pragma once

// Synthetic kitchen world with a known plausibility structure, used by the
// evaluation tests and the acceptance suite.
//
// Every verb has three themes and three plausible role2 objects; all nine
// pairs are plausible (rated 5 by every annotator) and each appears
// `plausible_repeats` times in the corpus as its sentence-mode linearization.
// One "medium" object per verb (mean rating 3.4, 3 corpus mentions per
// theme) and one "weak" object (mean 2.6, 2 mentions) land in the ambiguous
// band at lambda = 1 and move into the positive / negative subsets once
// lambda > 1.6. Every other combination with the object and theme pools is
// implausible (rated 1) and never occurs in the corpus.

#include <algorithm>
#include <string>
#include <vector>

#include "framefill/framefill.hpp"

namespace framefill::synthetic {

struct VerbWorld {
  std::string verb;
  std::vector<std::string> themes;
  std::vector<std::string> objects;
  std::string medium;
  std::string weak;
};

inline const std::vector<VerbWorld>& worlds() {
  static const std::vector<VerbWorld> w = {
      {"blend", {"banana", "strawberry", "mango"}, {"blender", "processor", "mixer"}, "jar", "pitcher"},
      {"brush", {"bread", "pastry", "crust"}, {"butter", "eggwash", "glaze"}, "honey", "syrup"},
      {"dip", {"chip", "cracker", "carrot"}, {"salsa", "hummus", "guacamole"}, "ranch", "mustard"},
      {"dump", {"scraps", "peelings", "leftovers"}, {"trash", "bin", "compost"}, "sink", "bag"},
      {"fill", {"pot", "kettle", "bottle"}, {"broth", "stock", "soup"}, "wine", "vinegar"},
      {"fry", {"egg", "bacon", "potato"}, {"skillet", "wok", "fryer"}, "griddle", "saucepan"},
      {"heat", {"sauce", "gravy", "chili"}, {"stove", "microwave", "oven"}, "grill", "toaster"},
      {"pour", {"water", "milk", "juice"}, {"cup", "glass", "mug"}, "jug", "bowl"},
      {"rub", {"chicken", "steak", "pork"}, {"spices", "garlic", "paprika"}, "lemon", "cinnamon"},
      {"season", {"fish", "salmon", "tuna"}, {"salt", "pepper", "thyme"}, "dill", "sugar"},
      {"sprinkle", {"cheese", "parsley", "sesame"}, {"pizza", "salad", "pasta"}, "toast", "cake"},
  };
  return w;
}

// Household nouns that never occur in the corpus.
inline const std::vector<std::string>& distractors() {
  static const std::vector<std::string> d = {
      "scissors", "plate",   "sponge", "fork",   "knife",   "phone",  "book",   "shoe",
      "pillow",   "lamp",    "remote", "wallet", "candle",  "towel",  "hammer", "stapler",
      "keyboard", "blanket", "mirror", "vase",   "crayon",  "ruler",  "sock",   "umbrella",
      "battery",  "clock",   "comb",   "helmet", "magazine", "pencil"};
  return d;
}

inline std::vector<std::string> object_pool() {
  std::vector<std::string> pool;
  for (const auto& w : worlds()) {
    pool.insert(pool.end(), w.objects.begin(), w.objects.end());
    pool.push_back(w.medium);
    pool.push_back(w.weak);
  }
  pool.insert(pool.end(), distractors().begin(), distractors().end());
  return pool;
}

inline std::vector<std::string> theme_pool() {
  std::vector<std::string> pool;
  for (const auto& w : worlds()) pool.insert(pool.end(), w.themes.begin(), w.themes.end());
  pool.insert(pool.end(), distractors().begin(), distractors().end());
  return pool;
}

struct Dataset {
  RoleLexicon lexicon;
  std::vector<Document> corpus;
  std::vector<PlausibilityRecord> records;
};

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

inline Dataset make_dataset(int plausible_repeats = 50) {
  Dataset ds;
  ds.lexicon = RoleLexicon::default_lexicon();
  Document doc{"synthetic", {}};
  const std::vector<int> plausible(5, 5), implausible(5, 1);
  const std::vector<int> medium = {3, 4, 3, 4, 3};  // 3.4
  const std::vector<int> weak = {3, 2, 3, 2, 3};    // 2.6

  for (const auto& w : worlds()) {
    VerbFrame shell = ds.lexicon.shell(w.verb);
    auto frame = [&](const std::string& a1, const std::string& a2) {
      VerbFrame f = shell;
      f.arg1 = a1;
      f.arg2 = a2;
      return f;
    };
    auto mention = [&](const VerbFrame& f, int times) {
      const Sentence s = linearize(f, LinearizationMode::kSentence, ds.lexicon);
      for (int i = 0; i < times; ++i) doc.sentences.push_back(s);
    };

    for (const auto& t : w.themes) {
      for (const auto& o : w.objects) mention(frame(t, o), plausible_repeats);
      mention(frame(t, w.medium), 3);
      mention(frame(t, w.weak), 2);
    }

    // Each theme against the whole object pool.
    for (const auto& t : w.themes) {
      for (const auto& o : object_pool()) {
        const auto& r = contains(w.objects, o) ? plausible
                        : o == w.medium        ? medium
                        : o == w.weak          ? weak
                                               : implausible;
        ds.records.push_back({frame(t, o), r});
      }
    }
    // Foreign themes against this verb's non-distractor objects.
    std::vector<std::string> own_objects = w.objects;
    own_objects.push_back(w.medium);
    own_objects.push_back(w.weak);
    for (const auto& t : theme_pool()) {
      if (contains(w.themes, t)) continue;
      for (const auto& o : own_objects) ds.records.push_back({frame(t, o), implausible});
    }
  }
  ds.corpus.push_back(std::move(doc));
  return ds;
}

}  // namespace framefill::synthetic
