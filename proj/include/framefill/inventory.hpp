#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "framefill/corpus.hpp"
#include "framefill/error.hpp"
#include "json.hpp"

namespace framefill {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  bool operator==(const Vec3&) const = default;
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

struct InventoryObject {
  std::string label;
  Vec3 position;
};

// Reduces a (possibly multi-word) object label to the single token used in
// frames: the last token after tokenization ("bell pepper" -> "pepper").
inline std::string head_token(std::string_view label) {
  Sentence toks = tokenize(label);
  return toks.empty() ? std::string() : toks.back();
}

// Objects available to fill a missing role, in detection order.
class ObjectInventory {
 public:
  ObjectInventory() = default;

  explicit ObjectInventory(std::vector<InventoryObject> objects) {
    for (auto& o : objects) add(std::move(o));
  }

  void add(InventoryObject object) {
    if (head_token(object.label).empty()) {
      throw Error(ErrorCode::kInvalidArgument, "inventory label must be non-empty");
    }
    if (!object.position.finite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "inventory position for '" + object.label + "' is not finite");
    }
    objects_.push_back(std::move(object));
  }

  bool empty() const { return objects_.empty(); }
  std::size_t size() const { return objects_.size(); }
  const std::vector<InventoryObject>& objects() const { return objects_; }

  // Distinct head tokens in inventory order.
  std::vector<std::string> distinct_heads() const {
    std::vector<std::string> out;
    for (const auto& o : objects_) {
      std::string h = head_token(o.label);
      if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(std::move(h));
    }
    return out;
  }

  // First object whose label or head token equals `token`.
  const InventoryObject* find(std::string_view token) const {
    for (const auto& o : objects_) {
      if (o.label == token || head_token(o.label) == token) return &o;
    }
    return nullptr;
  }

  // JSON array of {"label": str, "position": [x, y, z]}.
  static ObjectInventory from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorCode::kFormat, "inventory must be a JSON array");
    ObjectInventory inv;
    for (const auto& e : j) {
      if (!e.is_object() || !e.contains("label") || !e.contains("position") ||
          !e["label"].is_string() || !e["position"].is_array() || e["position"].size() != 3) {
        throw Error(ErrorCode::kFormat, "inventory entry needs \"label\" and 3-element \"position\"");
      }
      const auto& p = e["position"];
      for (const auto& c : p) {
        if (!c.is_number()) throw Error(ErrorCode::kFormat, "inventory position must be numeric");
      }
      inv.add({e["label"].get<std::string>(),
               {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}});
    }
    return inv;
  }

  static ObjectInventory load(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kFormat, path + ": " + e.what());
    }
    return from_json(j);
  }

 private:
  std::vector<InventoryObject> objects_;
};

}  // namespace framefill
