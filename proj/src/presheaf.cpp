#include "coend/presheaf.hpp"

#include <algorithm>

#include "coend/errors.hpp"

namespace coend {

FinitePresheaf::FinitePresheaf(std::vector<PresheafObject> objects, std::vector<PresheafEdge> edges)
    : objects_(std::move(objects)), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.source >= objects_.size() || e.target >= objects_.size())
      throw DomainMismatch("edge " + e.name + " has an unknown endpoint");
    if (e.action.dom_size() != size(e.source) || e.action.cod_size() != size(e.target))
      throw DomainMismatch("edge " + e.name + " action " + e.action.to_string() +
                           " does not match its endpoints");
  }
}

std::optional<std::size_t> FinitePresheaf::object_index(const std::string& name) const {
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i].name == name) return i;
  return std::nullopt;
}

FinitePresheaf power(const FinitePresheaf& p, std::size_t n) {
  std::vector<PresheafObject> objects;
  for (const auto& o : p.objects()) {
    PresheafObject po{o.name, {}};
    const auto count = checked_power(o.size(), n, 1u << 24);
    for (std::uint64_t r = 0; r < count; ++r) {
      const auto t = tuple_unrank(r, n, o.size());
      std::string s = "(";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) s += ',';
        s += o.labels[t[i]];
      }
      po.labels.push_back(s + ")");
    }
    objects.push_back(std::move(po));
  }
  std::vector<PresheafEdge> edges;
  for (const auto& e : p.edges()) {
    const std::size_t src = p.size(e.source);
    const std::size_t dst = p.size(e.target);
    const auto count = objects[e.source].size();
    std::vector<std::uint32_t> values(count);
    for (std::uint64_t r = 0; r < count; ++r) {
      auto t = tuple_unrank(r, n, src);
      for (auto& x : t) x = e.action(x);
      values[r] = static_cast<std::uint32_t>(tuple_rank(t, dst));
    }
    edges.push_back({e.name, e.source, e.target, FinFunction(std::move(values), objects[e.target].size())});
  }
  return FinitePresheaf(std::move(objects), std::move(edges));
}

bool check_inhabited(const FinitePresheaf& p) {
  return std::all_of(p.objects().begin(), p.objects().end(), [](const PresheafObject& o) { return o.size() > 0; });
}

FinitePresheaf relabel(const FinitePresheaf& p, const std::vector<FinFunction>& perms) {
  if (perms.size() != p.objects().size()) throw DomainMismatch("one permutation per object required");
  std::vector<PresheafObject> objects = p.objects();
  for (std::size_t c = 0; c < objects.size(); ++c) {
    const auto& pi = perms[c];
    if (pi.dom_size() != p.size(c) || pi.cod_size() != p.size(c) || !is_injective(pi))
      throw DomainMismatch("relabelling of " + objects[c].name + " is not a permutation");
    for (std::size_t x = 0; x < p.size(c); ++x) objects[c].labels[pi(x)] = p.objects()[c].labels[x];
  }
  std::vector<PresheafEdge> edges;
  for (const auto& e : p.edges()) {
    std::vector<std::uint32_t> values(p.size(e.source));
    for (std::size_t x = 0; x < values.size(); ++x) values[perms[e.source](x)] = perms[e.target](e.action(x));
    edges.push_back({e.name, e.source, e.target, FinFunction(std::move(values), p.size(e.target))});
  }
  return FinitePresheaf(std::move(objects), std::move(edges));
}

FinitePresheaf constant_presheaf(std::size_t size) {
  PresheafObject o{"c", {}};
  for (std::size_t i = 0; i < size; ++i) o.labels.push_back("x" + std::to_string(i));
  return FinitePresheaf({std::move(o)}, {});
}

FinitePresheaf one_in_three_presheaf() {
  PresheafObject v{"v", {"0", "1"}};
  PresheafObject vr{"v_R", {"(1,0,0)", "(0,1,0)", "(0,0,1)"}};
  const std::uint32_t rows[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<PresheafEdge> edges;
  for (std::uint32_t j = 0; j < 3; ++j) {
    std::vector<std::uint32_t> values{rows[0][j], rows[1][j], rows[2][j]};
    edges.push_back({"pi" + std::to_string(j), 1, 0, FinFunction(std::move(values), 2)});
  }
  return FinitePresheaf({std::move(v), std::move(vr)}, std::move(edges));
}

}  // namespace coend
