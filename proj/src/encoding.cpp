#include "coend/encoding.hpp"

#include <map>
#include <memory>

#include "coend/errors.hpp"

namespace coend {

std::optional<std::size_t> EncodingGraph::edge_index(const std::string& name) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == name) return i;
  return std::nullopt;
}

EncodingGraph build_encoding_graph(const RelLanguage& language, std::size_t n_trunc) {
  if (language.has_nullary()) throw PreconditionFailed("the encoding graph needs a language without nullary symbols");
  if (n_trunc < 2) throw PreconditionFailed("pairing truncation must be at least 2");
  EncodingGraph g;
  g.language = language;
  g.n_trunc = n_trunc;
  g.vertices.push_back("v");
  for (const auto& s : language.symbols()) g.vertices.push_back("v_" + s.name);
  for (std::size_t n = 1; n <= n_trunc; ++n)
    for (std::size_t i = 0; i < n; ++i)
      g.edges.push_back({"p^" + std::to_string(n) + "_" + std::to_string(i), EdgeKind::Pairing, 0, 0, n, i, 0});
  for (std::size_t n = 1; n <= n_trunc; ++n)
    for (std::size_t i = 0; i < n; ++i)
      g.edges.push_back({"p'^" + std::to_string(n) + "_" + std::to_string(i), EdgeKind::PrimedPairing, 0, 0, n, i, 0});
  for (std::size_t s = 0; s < language.size(); ++s) {
    const auto v = EncodingGraph::vertex_of(s);
    g.edges.push_back({"s'_" + language[s].name, EdgeKind::Section, v, 0, language[s].arity, 0, s});
    g.edges.push_back({"r_" + language[s].name, EdgeKind::Retraction, 0, v, language[s].arity, 0, s});
  }
  return g;
}

nlohmann::json describe_graph(const EncodingGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"name", e.name}, {"source", g.vertices[e.source]}, {"target", g.vertices[e.target]}});
  return {{"vertices", g.vertices}, {"edges", edges}, {"edge_count", g.edges.size()}, {"n_trunc", g.n_trunc}};
}

namespace {

// Every element of a finite carrier, or `samples` draws from an infinite one.
std::vector<Nat> carrier_elements(const VertexCarrier& c, std::size_t samples, std::mt19937_64& rng) {
  std::vector<Nat> out;
  if (c.size) {
    for (Nat x = 0; x < *c.size; ++x) out.push_back(x);
  } else {
    for (std::size_t i = 0; i < samples; ++i) out.push_back(c.sample(rng));
  }
  return out;
}

CheckResult law(std::string name, std::size_t checked, std::optional<nlohmann::json> violation) {
  CheckResult r{std::move(name), Status::Pass, "", {{"checked", checked}}};
  if (violation) {
    r.status = Status::Fail;
    r.detail["witness"] = *violation;
  }
  return r;
}

}  // namespace

std::vector<CheckResult> check_presheaf(const EncodingPresheaf& p, std::size_t samples, std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < p.graph.language.size(); ++s) {
    const auto& name = p.graph.language[s].name;
    const auto section = *p.graph.edge_index("s'_" + name);
    const auto retraction = *p.graph.edge_index("r_" + name);
    const auto elems = carrier_elements(p.carriers[EncodingGraph::vertex_of(s)], samples, rng);
    std::optional<nlohmann::json> violation;
    for (auto y : elems) {
      const Nat up = p.actions[section](y);
      const Nat back = p.actions[retraction](up);
      if (back != y) {
        violation = nlohmann::json{{"element", y}, {"s'", up}, {"r(s')", back}};
        break;
      }
    }
    auto r = law("retraction_law/" + name, elems.size(), violation);
    r.detail["exhaustive"] = p.carriers[EncodingGraph::vertex_of(s)].size.has_value();
    out.push_back(std::move(r));
  }
  return out;
}

Nat PresheafEncoding::section(std::size_t symbol, std::span<const Nat> q) const {
  if (q.size() != structure.relations.at(symbol).arity) throw DomainMismatch("tuple of the wrong arity");
  return pair_n(q);
}

PresheafEncoding build_presheaf_encoding(const NatStructure& a, std::size_t n_trunc, Nat sample_limit) {
  std::vector<RelSymbol> symbols;
  for (const auto& r : a.relations) {
    if (r.arity == 0) throw PreconditionFailed("relation " + r.name + " is nullary");
    if (r.count && *r.count == 0) throw PreconditionFailed("relation " + r.name + " is empty");
    symbols.push_back({r.name, r.arity});
  }
  if (sample_limit == 0) throw PreconditionFailed("sample limit must be positive");

  PresheafEncoding e;
  e.structure = a;
  std::vector<std::size_t> arities;
  for (std::size_t n = 1; n <= n_trunc; ++n) arities.push_back(n);
  e.pairing = CantorPairingSystem(arities);
  e.sample_limit = sample_limit;
  auto& p = e.presheaf;
  p.graph = build_encoding_graph(RelLanguage(std::move(symbols)), n_trunc);

  p.carriers.push_back({std::nullopt, [sample_limit](std::mt19937_64& rng) { return rng() % sample_limit; }});
  for (const auto& r : a.relations) {
    const Nat members = r.count.value_or(sample_limit);
    p.carriers.push_back({std::nullopt, [sample_limit, members](std::mt19937_64& rng) {
                            const Nat x = rng() % sample_limit;
                            const Nat k = rng() % members;
                            return pair2(x, k);
                          }});
  }

  const auto structure = std::make_shared<const NatStructure>(a);
  for (const auto& edge : p.graph.edges) {
    switch (edge.kind) {
      case EdgeKind::Pairing:
        p.actions.push_back([n = edge.n, i = edge.i](Nat x) { return unpair_n(x, n)[i]; });
        break;
      case EdgeKind::PrimedPairing:
        p.actions.push_back([n = edge.n, i = edge.i](Nat z) {
          const auto [x, w] = unpair2(z);
          return pair2(x, unpair_n(w, n)[i]);
        });
        break;
      case EdgeKind::Section:
        p.actions.push_back([structure, s = edge.symbol](Nat y) {
          const auto [x, k] = unpair2(y);
          return pair2(x, pair_n(structure->relations[s].at(k)));
        });
        break;
      case EdgeKind::Retraction:
        p.actions.push_back([structure, s = edge.symbol](Nat z) {
          const auto& rel = structure->relations[s];
          const auto [x, w] = unpair2(z);
          const auto q = unpair_n(w, rel.arity);
          if (!rel.contains(q)) return PresheafEncoding::default_fiber_element;
          const auto k = rel.index_of(q);
          if (!k) return PresheafEncoding::default_fiber_element;
          return pair2(x, *k);
        });
        break;
    }
  }
  return e;
}

std::vector<CheckResult> check_encoding(const PresheafEncoding& e, std::size_t samples, std::uint64_t seed) {
  auto out = check_presheaf(e.presheaf, samples, seed);
  const auto& g = e.presheaf.graph;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  for (std::size_t n = 1; n <= g.n_trunc; ++n) {
    std::optional<nlohmann::json> violation;
    // <x, <xs>> is an (n+1)-fold pairing, so sample n+1 coordinates clamped for that arity.
    const auto tuples = sample_tuples(rng, samples, n + 1, e.sample_limit);
    for (const auto& t : tuples) {
      const Nat x = t[0];
      const std::vector<Nat> xs(t.begin() + 1, t.end());
      const Nat z = pair_n(t);
      for (std::size_t i = 0; i < n && !violation; ++i) {
        const Nat got = e.presheaf.actions[*g.edge_index("p'^" + std::to_string(n) + "_" + std::to_string(i))](z);
        const Nat want = pair2(x, xs[i]);
        if (got != want) violation = nlohmann::json{{"x", x}, {"tuple", xs}, {"i", i}, {"got", got}, {"want", want}};
      }
      if (violation) break;
    }
    out.push_back(law("p_prime_law/" + std::to_string(n), tuples.size(), violation));
  }

  for (std::size_t n = 1; n <= g.n_trunc; ++n) {
    std::optional<nlohmann::json> violation;
    for (std::size_t k = 0; k < samples && !violation; ++k) {
      const Nat x = rng() % (Nat{1} << 40);
      std::vector<Nat> parts;
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(e.presheaf.actions[*g.edge_index("p^" + std::to_string(n) + "_" + std::to_string(i))](x));
      if (pair_n(parts) != x) violation = nlohmann::json{{"x", x}, {"components", parts}};
    }
    out.push_back(law("pairing_round_trip/" + std::to_string(n), samples, violation));
  }

  for (std::size_t s = 0; s < g.language.size(); ++s) {
    const auto& rel = e.structure.relations[s];
    const auto section = *g.edge_index("s'_" + rel.name);
    const Nat members = rel.count.value_or(e.sample_limit);
    std::optional<nlohmann::json> s_violation;
    std::optional<nlohmann::json> inj_violation;
    std::map<Nat, Nat> seen;  // s_λ(q) -> k
    for (std::size_t j = 0; j < samples; ++j) {
      const Nat x = rng() % e.sample_limit;
      const Nat k = rng() % members;
      const auto q = rel.at(k);
      if (!s_violation && !rel.contains(q)) s_violation = nlohmann::json{{"k", k}, {"tuple", q}, {"problem", "enumerated tuple is not a member"}};
      const Nat sq = e.section(s, q);
      const Nat got = e.presheaf.actions[section](e.fiber_element(x, k));
      if (!s_violation && got != pair2(x, sq))
        s_violation = nlohmann::json{{"x", x}, {"tuple", q}, {"got", got}, {"want", pair2(x, sq)}};
      auto [it, fresh] = seen.emplace(sq, k);
      if (!inj_violation && !fresh && it->second != k)
        inj_violation = nlohmann::json{{"k", it->second}, {"k'", k}, {"value", sq}};
    }
    out.push_back(law("s_prime_law/" + rel.name, samples, s_violation));
    auto inj = law("section_injective/" + rel.name, seen.size(), inj_violation);
    out.push_back(std::move(inj));
  }
  return out;
}

}  // namespace coend
