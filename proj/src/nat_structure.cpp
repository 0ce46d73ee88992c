#include "coend/nat_structure.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "coend/errors.hpp"

namespace coend {

std::optional<std::size_t> NatStructure::index_of(const std::string& relation) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == relation) return i;
  return std::nullopt;
}

NatRelation finite_nat_relation(std::string name, std::size_t arity, std::vector<std::vector<Nat>> tuples) {
  for (const auto& t : tuples)
    if (t.size() != arity) throw DomainMismatch("tuple of wrong length in relation " + name);
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  auto shared = std::make_shared<const std::vector<std::vector<Nat>>>(std::move(tuples));
  auto find = [shared](std::span<const Nat> t) -> std::optional<Nat> {
    const std::vector<Nat> key(t.begin(), t.end());
    auto it = std::lower_bound(shared->begin(), shared->end(), key);
    if (it == shared->end() || *it != key) return std::nullopt;
    return static_cast<Nat>(it - shared->begin());
  };
  NatRelation r;
  r.name = std::move(name);
  r.arity = arity;
  r.count = shared->size();
  r.contains = [find](std::span<const Nat> t) { return find(t).has_value(); };
  r.at = [shared](Nat k) { return shared->at(k); };
  r.index_of = find;
  return r;
}

NatStructure nat_order_structure() {
  NatStructure s;
  s.name = "nat-order";

  NatRelation lt;
  lt.name = "lt";
  lt.arity = 2;
  lt.contains = [](std::span<const Nat> t) { return t[0] < t[1]; };
  // Members are enumerated as k = <a, d> |-> (a, a + d + 1).
  lt.at = [](Nat k) {
    const auto [a, d] = unpair2(k);
    return std::vector<Nat>{a, a + d + 1};
  };
  lt.index_of = [](std::span<const Nat> t) -> std::optional<Nat> {
    if (t[0] >= t[1]) return std::nullopt;
    return pair2(t[0], t[1] - t[0] - 1);
  };
  s.relations.push_back(std::move(lt));

  NatRelation even;
  even.name = "even";
  even.arity = 1;
  even.contains = [](std::span<const Nat> t) { return t[0] % 2 == 0; };
  even.at = [](Nat k) {
    if (k > UINT64_MAX / 2) throw Overflow("even: index too large");
    return std::vector<Nat>{2 * k};
  };
  even.index_of = [](std::span<const Nat> t) -> std::optional<Nat> {
    if (t[0] % 2) return std::nullopt;
    return t[0] / 2;
  };
  s.relations.push_back(std::move(even));

  s.relations.push_back(finite_nat_relation("one_in_three", 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  return s;
}

AugmentedStructure augment_with_pairing(const NatStructure& a, const CantorPairingSystem& ps, std::vector<Nat> constants) {
  const std::size_t max_n = ps.arities().empty() ? 0 : ps.arities().back();
  if (constants.empty())
    for (std::size_t i = 0; i < max_n; ++i) constants.push_back(i);
  if (constants.size() < max_n)
    throw PreconditionFailed("need " + std::to_string(max_n) + " constants, got " + std::to_string(constants.size()));
  if (std::set<Nat>(constants.begin(), constants.end()).size() != constants.size())
    throw PreconditionFailed("constants must be pairwise distinct");

  AugmentedStructure out{a, ps, constants};
  auto cs = std::make_shared<const std::vector<Nat>>(constants);
  for (auto n : ps.arities()) {
    auto const_index = [cs, n](Nat y) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < n; ++i)
        if ((*cs)[i] == y) return i;
      return std::nullopt;
    };

    NatRelation t;
    t.name = "T" + std::to_string(n);
    t.arity = 1;
    t.count = n;
    t.contains = [const_index](std::span<const Nat> x) { return const_index(x[0]).has_value(); };
    t.at = [cs](Nat k) { return std::vector<Nat>{cs->at(k)}; };
    t.index_of = [const_index](std::span<const Nat> x) -> std::optional<Nat> {
      auto i = const_index(x[0]);
      if (!i) return std::nullopt;
      return *i;
    };
    out.structure.relations.push_back(std::move(t));

    NatRelation s;
    s.name = "S" + std::to_string(n);
    s.arity = 3;
    s.contains = [const_index, n](std::span<const Nat> x) {
      auto i = const_index(x[1]);
      return i && unpair_n(x[0], n)[*i] == x[2];
    };
    // Members are enumerated as k = x * n + i |-> (x, c_i, p^n_i(x)).
    s.at = [cs, n](Nat k) {
      const Nat x = k / n;
      const std::size_t i = k % n;
      return std::vector<Nat>{x, (*cs)[i], unpair_n(x, n)[i]};
    };
    s.index_of = [const_index, n](std::span<const Nat> x) -> std::optional<Nat> {
      auto i = const_index(x[1]);
      if (!i || unpair_n(x[0], n)[*i] != x[2]) return std::nullopt;
      if (x[0] > (UINT64_MAX - *i) / n) throw Overflow("S_n index out of range");
      return x[0] * n + *i;
    };
    out.structure.relations.push_back(std::move(s));
  }
  return out;
}

nlohmann::json ProjectionVerdict::to_json() const {
  nlohmann::json j{{"verdict", consistent ? "CONSISTENT" : "REFUTED"}, {"samples_checked", samples_checked}};
  if (index) j["index"] = *index;
  if (!reason.empty()) j["reason"] = reason;
  if (!witness.is_null()) j["witness"] = witness;
  return j;
}

ProjectionVerdict projection_certificate(const NatFunction& f, const AugmentedStructure& aug, std::size_t n,
                                         std::span<const std::vector<Nat>> samples) {
  if (n == 0) throw PreconditionFailed("projection certificate needs n >= 1");
  if (!aug.pairing.has_arity(n)) throw PreconditionFailed("pairing system lacks arity " + std::to_string(n));
  const auto t_index = aug.structure.index_of("T" + std::to_string(n));
  const auto s_index = aug.structure.index_of("S" + std::to_string(n));
  const auto& t_rel = aug.structure.relations[*t_index];
  const auto& s_rel = aug.structure.relations[*s_index];

  ProjectionVerdict v;
  const std::vector<Nat> cs(aug.constants.begin(), aug.constants.begin() + static_cast<std::ptrdiff_t>(n));
  const Nat c = f(cs);
  const std::vector<Nat> c_tuple{c};
  if (!t_rel.contains(c_tuple)) {
    v.reason = "T_n not preserved: f(c_0..c_{n-1}) is not a constant";
    v.witness = {{"value", c}};
    return v;
  }
  const std::size_t i = *t_rel.index_of(c_tuple);
  v.index = i;

  for (const auto& xs : samples) {
    if (xs.size() != n) throw DomainMismatch("sample of the wrong arity");
    const Nat x = aug.pairing.assemble(xs);
    const std::vector<Nat> diag(n, x);
    const Nat fx = f(diag);
    if (fx != x) {
      v.reason = "diagonal law fails";
      v.witness = {{"x", x}, {"f(x,..,x)", fx}};
      return v;
    }
    const Nat fz = f(xs);
    const std::vector<Nat> column{fx, c, fz};
    if (!s_rel.contains(column)) {
      v.reason = "S_n not preserved";
      v.witness = {{"inputs", xs}, {"x", x}, {"image", column}};
      return v;
    }
    if (fz != xs[i]) {
      v.reason = "not the projection onto coordinate " + std::to_string(i);
      v.witness = {{"inputs", xs}, {"value", fz}};
      return v;
    }
    ++v.samples_checked;
  }
  v.consistent = true;
  return v;
}

std::vector<std::vector<Nat>> sample_tuples(std::mt19937_64& rng, std::size_t count, std::size_t n, Nat limit) {
  if (limit == 0) throw PreconditionFailed("sample limit must be positive");
  const Nat safe = max_safe_coordinate(n);
  const Nat bound = safe == UINT64_MAX ? limit : std::min(limit, safe + 1);
  // Plain modulo keeps the stream identical across standard libraries.
  std::vector<std::vector<Nat>> out(count, std::vector<Nat>(n));
  for (auto& t : out)
    for (auto& x : t) x = rng() % bound;
  return out;
}

}  // namespace coend
