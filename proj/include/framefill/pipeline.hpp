#pragma once

// Instruction completion and symbolic waypoint planning.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "framefill/error.hpp"
#include "framefill/frames.hpp"
#include "framefill/inventory.hpp"
#include "framefill/scorers.hpp"
#include "json.hpp"

namespace framefill {

// Waypoint offsets for one verb, relative to the object that fills
// `target_role`.
struct ActionTemplate {
  std::string verb;
  std::string target_role;
  std::vector<Vec3> offsets;
};

class TemplateSet {
 public:
  void add(ActionTemplate t) {
    if (t.offsets.empty()) {
      throw Error(ErrorCode::kFormat, "template for '" + t.verb + "' has no waypoints");
    }
    for (const auto& o : t.offsets) {
      if (!o.finite()) throw Error(ErrorCode::kFormat, "template for '" + t.verb + "' has a non-finite offset");
    }
    templates_[t.verb] = std::move(t);
  }

  const ActionTemplate* find(std::string_view verb) const {
    auto it = templates_.find(std::string(verb));
    return it == templates_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return templates_.size(); }

  // Every template verb must be in the lexicon and target one of its roles.
  void validate(const RoleLexicon& lex) const {
    for (const auto& [verb, t] : templates_) {
      const LexiconEntry* e = lex.find(verb);
      if (e == nullptr) throw Error(ErrorCode::kFormat, "template verb '" + verb + "' is not in the lexicon");
      if (t.target_role != e->role1 && t.target_role != e->role2) {
        throw Error(ErrorCode::kFormat, "template for '" + verb + "' targets unknown role '" +
                                            t.target_role + "'");
      }
    }
  }

  // TSV: verb<TAB>target_role<TAB>dx,dy,dz;dx,dy,dz;...
  static TemplateSet read_tsv(std::istream& in, const std::string& origin = "<stream>") {
    TemplateSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) throw Error(ErrorCode::kFormat, where() + "expected 3 fields");
      ActionTemplate t{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), {}};
      std::stringstream points(line.substr(t2 + 1));
      std::string point;
      while (std::getline(points, point, ';')) {
        if (point.empty()) continue;
        std::stringstream coords(point);
        std::string c;
        std::vector<double> xyz;
        while (std::getline(coords, c, ',')) {
          char* end = nullptr;
          const double v = std::strtod(c.c_str(), &end);
          if (c.empty() || end != c.c_str() + c.size()) {
            throw Error(ErrorCode::kFormat, where() + "bad coordinate '" + c + "'");
          }
          xyz.push_back(v);
        }
        if (xyz.size() != 3) throw Error(ErrorCode::kFormat, where() + "waypoint needs 3 coordinates");
        t.offsets.push_back({xyz[0], xyz[1], xyz[2]});
      }
      try {
        set.add(std::move(t));
      } catch (const Error& e) {
        throw Error(ErrorCode::kFormat, where() + e.what());
      }
    }
    return set;
  }

  static TemplateSet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot read templates '" + path + "'");
    return read_tsv(in, path);
  }

 private:
  std::map<std::string, ActionTemplate> templates_;
};

struct WaypointPlan {
  VerbFrame frame;
  std::vector<Vec3> waypoints;
};

inline nlohmann::json to_json(const WaypointPlan& p) {
  nlohmann::json j;
  j["frame"] = to_json(p.frame);
  j["waypoints"] = nlohmann::json::array();
  for (const auto& w : p.waypoints) j["waypoints"].push_back({w.x, w.y, w.z});
  return j;
}

// Completes one parsed frame: complete frames pass through unchanged,
// otherwise the missing slot is filled with the best-scoring inventory object.
inline VerbFrame complete_frame(const VerbFrame& f, const ObjectInventory& inv, const Scorer& scorer) {
  if (inv.empty()) throw Error(ErrorCode::kEmptyInventory, "no objects to choose from");
  if (missing_role(f) == MissingRole::kNone) return f;
  const auto cands = candidates(f, inv);
  return cands[rank(scorer, cands)];
}

// Completes every frame of the instruction, in order.
inline std::vector<VerbFrame> complete_all(const Sentence& instruction, const ObjectInventory& inv,
                                           const Scorer& scorer, const RoleLexicon& lex) {
  if (inv.empty()) throw Error(ErrorCode::kEmptyInventory, "no objects to choose from");
  std::vector<VerbFrame> out;
  for (const auto& f : parse(instruction, lex)) out.push_back(complete_frame(f, inv, scorer));
  return out;
}

// Completes the first frame of the instruction.
inline VerbFrame complete(const Sentence& instruction, const ObjectInventory& inv, const Scorer& scorer,
                          const RoleLexicon& lex) {
  if (inv.empty()) throw Error(ErrorCode::kEmptyInventory, "no objects to choose from");
  return complete_frame(parse(instruction, lex).front(), inv, scorer);
}

// Absolute waypoints: target object position + each template offset, in order.
inline WaypointPlan plan(const VerbFrame& f, const ObjectInventory& inv, const TemplateSet& templates) {
  if (!f.complete()) throw Error(ErrorCode::kIncompleteFrame, "cannot plan " + describe(f));
  const ActionTemplate* t = templates.find(f.predicate);
  if (t == nullptr) throw Error(ErrorCode::kNoTemplate, "no motion template for '" + f.predicate + "'");
  const std::string* target = nullptr;
  if (t->target_role == f.role1) {
    target = &*f.arg1;
  } else if (t->target_role == f.role2) {
    target = &*f.arg2;
  } else {
    throw Error(ErrorCode::kNoTemplate, "template role '" + t->target_role + "' is not a role of " +
                                            describe(f));
  }
  const InventoryObject* obj = inv.find(*target);
  if (obj == nullptr) throw Error(ErrorCode::kObjectNotFound, "'" + *target + "' is not in the inventory");
  WaypointPlan p{f, {}};
  for (const auto& o : t->offsets) p.waypoints.push_back(obj->position + o);
  return p;
}

}  // namespace framefill
