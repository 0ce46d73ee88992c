#include "coend/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "coend/errors.hpp"

namespace coend {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Parsed document plus enough of the source to point at problems.
class Doc {
 public:
  explicit Doc(const std::string& text) : text_(text) {
    try {
      root_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_column(e.byte == 0 ? 0 : e.byte - 1);
      std::string what = e.what();
      // Drop nlohmann's own position prefix; LoadError appends line and column.
      if (auto p = what.find(": syntax error"); p != std::string::npos) what = what.substr(p + 2);
      throw LoadError("invalid JSON: " + what, line, col);
    }
    if (!root_.is_object()) fail("top level must be an object");
  }

  const json& root() const { return root_; }

  // Errors point at the first occurrence of `anchor` (usually a quoted key or value).
  [[noreturn]] void fail(const std::string& what, const std::string& anchor = "") const {
    const auto pos = anchor.empty() ? std::string::npos : text_.find(anchor);
    if (pos == std::string::npos) {
      const auto start = text_.find_first_not_of(" \t\r\n");
      const auto [line, col] = line_column(start == std::string::npos ? 0 : start);
      throw LoadError(what, line, col);
    }
    const auto [line, col] = line_column(pos);
    throw LoadError(what, line, col);
  }

  const json& member(const json& obj, const std::string& key) const {
    if (!obj.is_object() || !obj.contains(key)) fail("missing key \"" + key + "\"", last_anchor(obj));
    return obj.at(key);
  }

  std::size_t natural(const json& v, const std::string& anchor) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail("expected a non-negative integer", anchor);
    return v.get<std::size_t>();
  }

  std::string string(const json& v, const std::string& anchor) const {
    if (!v.is_string()) fail("expected a string", anchor);
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& anchor) const {
    if (!v.is_array()) fail("expected an array", anchor);
    return v;
  }

 private:
  std::pair<std::size_t, std::size_t> line_column(std::size_t offset) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  static std::string last_anchor(const json& obj) {
    if (obj.is_object() && obj.contains("name") && obj["name"].is_string()) return "\"" + obj["name"].get<std::string>() + "\"";
    return "";
  }

  const std::string& text_;
  json root_;
};

std::string in_quotes(const std::string& s) { return "\"" + s + "\""; }

std::string action_key(const FinFunction& g) {
  std::string s = std::to_string(g.dom_size()) + "->" + std::to_string(g.cod_size()) + ":";
  for (std::size_t i = 0; i < g.dom_size(); ++i) s += (i ? "," : "") + std::to_string(g(i));
  return s;
}

std::uint32_t element_index(const Doc& doc, const json& v, std::span<const std::string> labels, const std::string& anchor) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == s) return static_cast<std::uint32_t>(i);
    doc.fail("unknown label \"" + s + "\"", in_quotes(s));
  }
  const auto i = doc.natural(v, anchor);
  if (i >= labels.size()) doc.fail("index " + std::to_string(i) + " out of range", anchor);
  return static_cast<std::uint32_t>(i);
}

}  // namespace

TruncatedFunctor load_functor(const std::string& text) {
  const Doc doc(text);
  const auto& root = doc.root();
  const std::string name = root.contains("name") ? doc.string(root["name"], "\"name\"") : "file";
  const std::size_t bound = doc.natural(doc.member(root, "bound"), "\"bound\"");
  if (bound < 2) doc.fail("bound must be at least 2", "\"bound\"");
  if (bound > 6) doc.fail("bound above 6 is not supported for tabulated functors", "\"bound\"");
  const auto& values = doc.array(doc.member(root, "values"), "\"values\"");
  if (values.size() != bound + 1) doc.fail("\"values\" must list F[0] .. F[bound]", "\"values\"");
  std::vector<std::vector<std::string>> labels;
  for (const auto& level : values) {
    std::vector<std::string> ls;
    for (const auto& l : doc.array(level, "\"values\"")) ls.push_back(doc.string(l, "\"values\""));
    labels.push_back(std::move(ls));
  }
  const auto& actions = doc.member(root, "actions");
  if (!actions.is_object()) doc.fail("\"actions\" must be an object", "\"actions\"");

  std::map<std::string, std::vector<std::uint32_t>> table;
  for (std::size_t k = 0; k <= bound; ++k) {
    for (std::size_t l = 0; l <= bound; ++l) {
      for (const auto& g : enumerate_functions(k, l)) {
        const auto key = action_key(g);
        if (!actions.contains(key)) doc.fail("missing action for " + key, "\"actions\"");
        const auto& arr = doc.array(actions[key], in_quotes(key));
        if (arr.size() != labels[k].size())
          doc.fail("action " + key + " must have " + std::to_string(labels[k].size()) + " entries", in_quotes(key));
        std::vector<std::uint32_t> v;
        for (const auto& e : arr) v.push_back(element_index(doc, e, labels[l], in_quotes(key)));
        table[key] = std::move(v);
      }
    }
  }
  if (actions.size() != table.size()) {
    for (const auto& [key, _] : actions.items())
      if (!table.count(key)) doc.fail("unexpected action key " + key, in_quotes(key));
  }
  try {
    return TruncatedFunctor::generate(
        name, bound, [labels](std::size_t k) { return labels[k]; },
        [table](const FinFunction& g, std::uint32_t e) { return table.at(action_key(g))[e]; });
  } catch (const Error& e) {
    doc.fail(e.what(), "\"bound\"");
  }
}

json functor_to_json(const TruncatedFunctor& f) {
  json values = json::array();
  for (std::size_t k = 0; k <= f.bound(); ++k) values.push_back(std::vector<std::string>(f.labels(k).begin(), f.labels(k).end()));
  json actions = json::object();
  for (std::size_t k = 0; k <= f.bound(); ++k)
    for (std::size_t l = 0; l <= f.bound(); ++l)
      for (const auto& g : enumerate_functions(k, l)) {
        const auto a = f.action(k, l, g.rank());
        actions[action_key(g)] = std::vector<std::uint32_t>(a.begin(), a.end());
      }
  return {{"name", f.name()}, {"bound", f.bound()}, {"values", values}, {"actions", actions}};
}

RelStructure load_structure(const std::string& text) {
  const Doc doc(text);
  const auto& root = doc.root();
  std::vector<std::string> carrier;
  for (const auto& c : doc.array(doc.member(root, "carrier"), "\"carrier\"")) carrier.push_back(doc.string(c, "\"carrier\""));
  std::vector<RelSymbol> symbols;
  std::vector<std::vector<Tuple>> relations;
  for (const auto& r : doc.array(doc.member(root, "relations"), "\"relations\"")) {
    const auto name = doc.string(doc.member(r, "name"), "\"relations\"");
    const auto anchor = in_quotes(name);
    const auto arity = doc.natural(doc.member(r, "arity"), anchor);
    std::vector<Tuple> tuples;
    for (const auto& t : doc.array(doc.member(r, "tuples"), anchor)) {
      if (!t.is_array() || t.size() != arity) doc.fail("tuple of relation " + name + " must have " + std::to_string(arity) + " entries", anchor);
      Tuple tuple;
      for (const auto& e : t) tuple.push_back(element_index(doc, e, carrier, anchor));
      tuples.push_back(std::move(tuple));
    }
    symbols.push_back({name, arity});
    relations.push_back(std::move(tuples));
  }
  try {
    return RelStructure(RelLanguage(std::move(symbols)), std::move(carrier), std::move(relations));
  } catch (const Error& e) {
    doc.fail(e.what(), "\"relations\"");
  }
}

json structure_to_json(const RelStructure& a) {
  json rels = json::array();
  for (std::size_t s = 0; s < a.language().size(); ++s) {
    json tuples = json::array();
    for (const auto& t : a.relation(s)) tuples.push_back(t);
    rels.push_back({{"name", a.language()[s].name}, {"arity", a.language()[s].arity}, {"tuples", tuples}});
  }
  return {{"carrier", std::vector<std::string>(a.carrier().begin(), a.carrier().end())}, {"relations", rels}};
}

NatStructure load_nat_structure(const std::string& text) {
  const Doc doc(text);
  const auto& root = doc.root();
  if (root.contains("carrier")) doc.fail("a structure on ℕ has no \"carrier\" key", "\"carrier\"");
  NatStructure s;
  s.name = root.contains("name") ? doc.string(root["name"], "\"name\"") : "file";
  for (const auto& r : doc.array(doc.member(root, "relations"), "\"relations\"")) {
    const auto name = doc.string(doc.member(r, "name"), "\"relations\"");
    const auto anchor = in_quotes(name);
    const auto arity = doc.natural(doc.member(r, "arity"), anchor);
    std::vector<std::vector<Nat>> tuples;
    for (const auto& t : doc.array(doc.member(r, "tuples"), anchor)) {
      if (!t.is_array() || t.size() != arity) doc.fail("tuple of relation " + name + " must have " + std::to_string(arity) + " entries", anchor);
      std::vector<Nat> tuple;
      for (const auto& e : t) tuple.push_back(doc.natural(e, anchor));
      tuples.push_back(std::move(tuple));
    }
    if (s.index_of(name)) doc.fail("duplicate relation " + name, anchor);
    s.relations.push_back(finite_nat_relation(name, arity, std::move(tuples)));
  }
  return s;
}

FinitePresheaf load_presheaf(const std::string& text) {
  const Doc doc(text);
  const auto& root = doc.root();
  std::vector<PresheafObject> objects;
  std::map<std::string, std::size_t> index;
  for (const auto& o : doc.array(doc.member(root, "objects"), "\"objects\"")) {
    PresheafObject po{doc.string(doc.member(o, "name"), "\"objects\""), {}};
    for (const auto& l : doc.array(doc.member(o, "labels"), in_quotes(po.name))) po.labels.push_back(doc.string(l, in_quotes(po.name)));
    if (!index.emplace(po.name, objects.size()).second) doc.fail("duplicate object " + po.name, in_quotes(po.name));
    objects.push_back(std::move(po));
  }
  std::vector<PresheafEdge> edges;
  const json no_edges = json::array();
  for (const auto& e : root.contains("edges") ? doc.array(root["edges"], "\"edges\"") : no_edges) {
    const auto name = doc.string(doc.member(e, "name"), "\"edges\"");
    const auto anchor = in_quotes(name);
    auto endpoint = [&](const char* key) {
      const auto n = doc.string(doc.member(e, key), anchor);
      auto it = index.find(n);
      if (it == index.end()) doc.fail("unknown object " + n, anchor);
      return it->second;
    };
    const auto s = endpoint("source");
    const auto t = endpoint("target");
    const auto& map = doc.array(doc.member(e, "map"), anchor);
    if (map.size() != objects[s].size()) doc.fail("map of edge " + name + " must have " + std::to_string(objects[s].size()) + " entries", anchor);
    std::vector<std::uint32_t> values;
    for (const auto& v : map) values.push_back(element_index(doc, v, objects[t].labels, anchor));
    edges.push_back({name, s, t, FinFunction(std::move(values), objects[t].size())});
  }
  return FinitePresheaf(std::move(objects), std::move(edges));
}

json presheaf_to_json(const FinitePresheaf& p) {
  json objects = json::array();
  for (const auto& o : p.objects()) objects.push_back({{"name", o.name}, {"labels", o.labels}});
  json edges = json::array();
  for (const auto& e : p.edges()) {
    edges.push_back({{"name", e.name},
                     {"source", p.objects()[e.source].name},
                     {"target", p.objects()[e.target].name},
                     {"map", std::vector<std::uint32_t>(e.action.values().begin(), e.action.values().end())}});
  }
  return {{"objects", objects}, {"edges", edges}};
}

TruncatedFunctor resolve_functor(const std::string& spec, std::size_t bound) {
  if (spec.ends_with(".json") || std::filesystem::exists(spec)) return load_functor(read_text_file(spec));
  return builtin_functor(spec, bound);
}

RelStructure resolve_structure(const std::string& spec) {
  if (spec == "one-in-three") return one_in_three_structure();
  if (spec == "two-point") return two_point_no_relations();
  if (spec == "singleton") return singleton_no_relations();
  return load_structure(read_text_file(spec));
}

NatStructure resolve_nat_structure(const std::string& spec) {
  if (spec == "nat-order") return nat_order_structure();
  return load_nat_structure(read_text_file(spec));
}

FinitePresheaf resolve_presheaf(const std::string& spec) {
  if (spec == "one-in-three") return one_in_three_presheaf();
  if (spec == "two-point") return constant_presheaf(2);
  if (spec == "singleton") return constant_presheaf(1);
  return load_presheaf(read_text_file(spec));
}

}  // namespace coend
