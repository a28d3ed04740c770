#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mlat/frames.hpp"
#include "mlat/monadic.hpp"

namespace mlat {

using Json = nlohmann::ordered_json;
using NamePairs = std::vector<std::pair<std::string, std::string>>;

/// {"kind":"lattice","elements":[...],"leq":[[a,b],...],"nabla":{...},"delta":{...}}
/// leq lists generator pairs; nabla and delta are optional name-to-name maps.
struct LatticeDoc {
  std::vector<std::string> elements;
  NamePairs leq;
  std::optional<NamePairs> nabla, delta;
  bool operator==(const LatticeDoc&) const = default;
};

/// {"kind":"space","elements":[...],"leq":[...],"classes":[[...],...]}
struct SpaceDoc {
  std::vector<std::string> elements;
  NamePairs leq;
  std::vector<std::vector<std::string>> classes;
  bool operator==(const SpaceDoc&) const = default;
};

/// {"kind":"map","source":file,"target":file,"assign":{...}}; paths are relative to the map file.
struct MapDoc {
  std::string source, target;
  NamePairs assign;
  bool operator==(const MapDoc&) const = default;
};

using StructureDoc = std::variant<LatticeDoc, SpaceDoc, MapDoc>;

namespace detail {

/// Line of the first occurrence of "key" in the text, or 0.
inline std::size_t line_of_key(const std::string& text, const std::string& key) {
  auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

struct Reader {
  const std::string& text;

  [[noreturn]] void fail(const std::string& field, const std::string& msg, const std::string& key = {}) const {
    throw ParseError(field + ": " + msg, line_of_key(text, key.empty() ? field : key), field);
  }

  std::string string_at(const Json& j, const std::string& field, const std::string& key) const {
    if (!j.is_string()) fail(field, "expected a string", key);
    return j.get<std::string>();
  }

  std::vector<std::string> names(const Json& doc, const std::string& field) const {
    if (!doc.contains(field)) fail(field, "missing field");
    const Json& a = doc.at(field);
    if (!a.is_array()) fail(field, "expected an array of names");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto s = string_at(a[i], field + "[" + std::to_string(i) + "]", field);
      if (!seen.insert(s).second) fail(field, "duplicate name '" + s + "'");
      out.push_back(s);
    }
    return out;
  }

  NamePairs pairs(const Json& doc, const std::string& field) const {
    NamePairs out;
    if (!doc.contains(field)) return out;
    const Json& a = doc.at(field);
    if (!a.is_array()) fail(field, "expected an array of [a, b] pairs");
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto f = field + "[" + std::to_string(i) + "]";
      if (!a[i].is_array() || a[i].size() != 2) fail(f, "expected a pair [a, b]", field);
      out.emplace_back(string_at(a[i][0], f, field), string_at(a[i][1], f, field));
    }
    return out;
  }

  NamePairs name_map(const Json& j, const std::string& field) const {
    if (!j.is_object()) fail(field, "expected an object mapping names to names");
    NamePairs out;
    for (auto& [k, v] : j.items()) out.emplace_back(k, string_at(v, field + "." + k, field));
    return out;
  }
};

inline Json pairs_json(const NamePairs& ps) {
  Json a = Json::array();
  for (auto& [x, y] : ps) a.push_back({x, y});
  return a;
}
inline Json map_json(const NamePairs& ps) {
  Json o = Json::object();
  for (auto& [x, y] : ps) o[x] = y;
  return o;
}

}  // namespace detail

inline StructureDoc parse_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t upto = std::min(text.size(), static_cast<std::size_t>(e.byte));
    auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    throw ParseError(std::string("malformed document: ") + e.what(), line, "");
  }
  detail::Reader r{text};
  if (!doc.is_object()) throw ParseError("document must be an object", 1, "");
  if (!doc.contains("kind")) r.fail("kind", "missing field");
  auto kind = r.string_at(doc["kind"], "kind", "kind");
  if (kind == "lattice") {
    LatticeDoc d{r.names(doc, "elements"), r.pairs(doc, "leq"), {}, {}};
    if (doc.contains("nabla")) d.nabla = r.name_map(doc["nabla"], "nabla");
    if (doc.contains("delta")) d.delta = r.name_map(doc["delta"], "delta");
    return d;
  }
  if (kind == "space") {
    SpaceDoc d{r.names(doc, "elements"), r.pairs(doc, "leq"), {}};
    if (!doc.contains("classes")) r.fail("classes", "missing field");
    const Json& c = doc["classes"];
    if (!c.is_array()) r.fail("classes", "expected an array of blocks");
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto f = "classes[" + std::to_string(i) + "]";
      if (!c[i].is_array()) r.fail(f, "expected an array of names", "classes");
      std::vector<std::string> block;
      for (auto& s : c[i]) block.push_back(r.string_at(s, f, "classes"));
      d.classes.push_back(std::move(block));
    }
    return d;
  }
  if (kind == "map") {
    if (!doc.contains("source")) r.fail("source", "missing field");
    if (!doc.contains("target")) r.fail("target", "missing field");
    if (!doc.contains("assign")) r.fail("assign", "missing field");
    return MapDoc{r.string_at(doc["source"], "source", "source"), r.string_at(doc["target"], "target", "target"),
                  r.name_map(doc["assign"], "assign")};
  }
  r.fail("kind", "unknown kind '" + kind + "' (expected lattice, space or map)");
}

inline Json to_json(const StructureDoc& doc) {
  Json j;
  if (auto* l = std::get_if<LatticeDoc>(&doc)) {
    j["kind"] = "lattice";
    j["elements"] = l->elements;
    j["leq"] = detail::pairs_json(l->leq);
    if (l->nabla) j["nabla"] = detail::map_json(*l->nabla);
    if (l->delta) j["delta"] = detail::map_json(*l->delta);
  } else if (auto* s = std::get_if<SpaceDoc>(&doc)) {
    j["kind"] = "space";
    j["elements"] = s->elements;
    j["leq"] = detail::pairs_json(s->leq);
    j["classes"] = s->classes;
  } else {
    auto& m = std::get<MapDoc>(doc);
    j["kind"] = "map";
    j["source"] = m.source;
    j["target"] = m.target;
    j["assign"] = detail::map_json(m.assign);
  }
  return j;
}

inline std::string serialize(const StructureDoc& doc) { return to_json(doc).dump(2) + "\n"; }

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string(), 0, "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline StructureDoc load_document(const std::filesystem::path& path) { return parse_document(read_text(path)); }

inline void write_document(const std::filesystem::path& path, const StructureDoc& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string(), 0, "");
  out << serialize(doc);
}

namespace detail {
inline std::size_t name_index(const std::vector<std::string>& names, const std::string& s, const std::string& field) {
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) throw ParseError(field + ": unknown element '" + s + "'", 0, field);
  return static_cast<std::size_t>(it - names.begin());
}

inline void check_pairs(const std::vector<std::string>& names, const NamePairs& ps, const std::string& field) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    name_index(names, ps[i].first, field + "[" + std::to_string(i) + "]");
    name_index(names, ps[i].second, field + "[" + std::to_string(i) + "]");
  }
}

inline UnaryOp op_table(const std::vector<std::string>& names, const NamePairs& m, const std::string& field) {
  UnaryOp t(names.size(), SIZE_MAX);
  for (auto& [k, v] : m) t[name_index(names, k, field)] = name_index(names, v, field + "." + k);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] == SIZE_MAX) throw ParseError(field + ": no value for '" + names[i] + "'", 0, field);
  return t;
}
}  // namespace detail

/// The order is rebuilt from the generator pairs; meets and joins are always recomputed.
/// Throws ParseError for unknown names, StructuralError/OrderCycleError when the order is
/// not a lattice order.
inline DistLattice to_lattice(const LatticeDoc& d) {
  detail::check_pairs(d.elements, d.leq, "leq");
  return DistLattice::from_order(FinitePoset::from_pairs(d.elements, d.leq));
}

/// Operators named in the document; a lattice without them gets none.
inline std::optional<Operators> to_operators(const LatticeDoc& d) {
  if (!d.nabla && !d.delta) return std::nullopt;
  if (!d.nabla) throw ParseError("nabla: missing while delta is given", 0, "nabla");
  if (!d.delta) throw ParseError("delta: missing while nabla is given", 0, "delta");
  return Operators{detail::op_table(d.elements, *d.nabla, "nabla"), detail::op_table(d.elements, *d.delta, "delta")};
}

inline MqSpace to_space(const SpaceDoc& d) {
  detail::check_pairs(d.elements, d.leq, "leq");
  auto p = FinitePoset::from_pairs(d.elements, d.leq);
  std::vector<std::size_t> label(d.elements.size(), SIZE_MAX);
  for (std::size_t b = 0; b < d.classes.size(); ++b)
    for (auto& s : d.classes[b]) {
      auto f = "classes[" + std::to_string(b) + "]";
      auto i = detail::name_index(d.elements, s, f);
      if (label[i] != SIZE_MAX) throw ParseError(f + ": '" + s + "' appears in two blocks", 0, "classes");
      label[i] = b;
    }
  for (std::size_t i = 0; i < label.size(); ++i)
    if (label[i] == SIZE_MAX) throw ParseError("classes: '" + d.elements[i] + "' is in no block", 0, "classes");
  return {std::move(p), EquivRelation::from_labels(label)};
}

/// Loads both ends relative to the map file's directory.
inline SpaceMap to_map(const MapDoc& d, const std::filesystem::path& map_file) {
  auto dir = map_file.parent_path();
  auto load_space = [&](const std::string& rel, const std::string& field) {
    auto doc = load_document(dir / rel);
    auto* s = std::get_if<SpaceDoc>(&doc);
    if (!s) throw ParseError(field + ": " + rel + " is not a space document", 0, field);
    return std::make_shared<const MqSpace>(to_space(*s));
  };
  auto src = load_space(d.source, "source");
  auto tgt = load_space(d.target, "target");
  std::vector<std::size_t> map(src->size(), SIZE_MAX);
  std::vector<std::string> sn, tn;
  for (std::size_t i = 0; i < src->size(); ++i) sn.push_back(src->name(i));
  for (std::size_t i = 0; i < tgt->size(); ++i) tn.push_back(tgt->name(i));
  for (auto& [k, v] : d.assign) map[detail::name_index(sn, k, "assign")] = detail::name_index(tn, v, "assign." + k);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] == SIZE_MAX) throw ParseError("assign: no image for '" + sn[i] + "'", 0, "assign");
  return {src, tgt, map};
}

inline LatticeDoc lattice_doc(const DistLattice& l, const std::optional<Operators>& ops = std::nullopt) {
  LatticeDoc d;
  for (std::size_t a = 0; a < l.size(); ++a) d.elements.push_back(l.name(a));
  for (auto [a, b] : l.order().covers()) d.leq.emplace_back(l.name(a), l.name(b));
  if (ops) {
    d.nabla.emplace();
    d.delta.emplace();
    for (std::size_t a = 0; a < l.size(); ++a) {
      d.nabla->emplace_back(l.name(a), l.name(ops->nabla[a]));
      d.delta->emplace_back(l.name(a), l.name(ops->delta[a]));
    }
  }
  return d;
}

inline SpaceDoc space_doc(const MqSpace& x) {
  SpaceDoc d;
  for (std::size_t a = 0; a < x.size(); ++a) d.elements.push_back(x.name(a));
  for (auto [a, b] : x.poset.covers()) d.leq.emplace_back(x.name(a), x.name(b));
  for (Mask b : x.equiv.blocks()) {
    std::vector<std::string> block;
    bits::for_each(b, [&](std::size_t a) { block.push_back(x.name(a)); });
    d.classes.push_back(std::move(block));
  }
  return d;
}

}  // namespace mlat
