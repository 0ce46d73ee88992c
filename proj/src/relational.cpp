#include "coend/relational.hpp"

#include <algorithm>
#include <set>

#include "coend/errors.hpp"

namespace coend {

RelLanguage::RelLanguage(std::vector<RelSymbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> names;
  for (const auto& s : symbols_)
    if (!names.insert(s.name).second) throw PreconditionFailed("duplicate relation symbol " + s.name);
}

std::optional<std::size_t> RelLanguage::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

bool RelLanguage::has_nullary() const {
  return std::any_of(symbols_.begin(), symbols_.end(), [](const RelSymbol& s) { return s.arity == 0; });
}

RelStructure::RelStructure(RelLanguage language, std::vector<std::string> carrier,
                           std::vector<std::vector<Tuple>> relations)
    : language_(std::move(language)), carrier_(std::move(carrier)), relations_(std::move(relations)) {
  if (relations_.size() != language_.size())
    throw DomainMismatch("expected " + std::to_string(language_.size()) + " relations, got " +
                         std::to_string(relations_.size()));
  for (std::size_t s = 0; s < relations_.size(); ++s) {
    auto& rel = relations_[s];
    for (const auto& t : rel) {
      if (t.size() != language_[s].arity)
        throw DomainMismatch("tuple of length " + std::to_string(t.size()) + " in relation " + language_[s].name +
                             " of arity " + std::to_string(language_[s].arity));
      for (auto x : t)
        if (x >= carrier_.size()) throw DomainMismatch("tuple entry outside the carrier in " + language_[s].name);
    }
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  }
}

RelStructure RelStructure::with_size(RelLanguage language, std::size_t size, std::vector<std::vector<Tuple>> relations) {
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < size; ++i) carrier.push_back(std::to_string(i));
  return RelStructure(std::move(language), std::move(carrier), std::move(relations));
}

bool RelStructure::contains(std::size_t symbol, std::span<const std::uint32_t> tuple) const {
  const auto& rel = relations_.at(symbol);
  auto it = std::lower_bound(rel.begin(), rel.end(), tuple, [](const Tuple& a, std::span<const std::uint32_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return it != rel.end() && std::equal(it->begin(), it->end(), tuple.begin(), tuple.end());
}

RelStructure product(const RelStructure& a, const RelStructure& b) {
  if (!(a.language() == b.language())) throw DomainMismatch("product of structures over different languages");
  std::vector<std::string> carrier;
  for (const auto& x : a.carrier())
    for (const auto& y : b.carrier()) carrier.push_back("(" + x + "," + y + ")");
  std::vector<std::vector<Tuple>> rels(a.language().size());
  const auto nb = static_cast<std::uint32_t>(b.size());
  for (std::size_t s = 0; s < rels.size(); ++s)
    for (const auto& t : a.relation(s))
      for (const auto& u : b.relation(s)) {
        Tuple v(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i] * nb + u[i];
        rels[s].push_back(std::move(v));
      }
  return RelStructure(a.language(), std::move(carrier), std::move(rels));
}

RelStructure power(const RelStructure& a, std::size_t n) {
  const std::size_t base = a.size();
  const auto count = checked_power(base, n, 1u << 24);
  std::vector<std::string> carrier;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto t = tuple_unrank(r, n, base);
    if (n == 1) {
      carrier.push_back(a.carrier()[t[0]]);
      continue;
    }
    std::string s = "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += ',';
      s += a.carrier()[t[i]];
    }
    carrier.push_back(s + ")");
  }
  std::vector<std::vector<Tuple>> rels(a.language().size());
  for (std::size_t s = 0; s < rels.size(); ++s) {
    const auto rel = a.relation(s);
    const std::size_t arity = a.language()[s].arity;
    // One tuple of the relation per coordinate of the power.
    const auto choices = checked_power(rel.size(), n, 1u << 24);
    std::vector<std::uint32_t> column(n);
    for (std::uint64_t c = 0; c < choices; ++c) {
      const auto pick = tuple_unrank(c, n, rel.size());
      Tuple v(arity);
      for (std::size_t j = 0; j < arity; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = rel[pick[i]][j];
        v[j] = static_cast<std::uint32_t>(tuple_rank(column, base));
      }
      rels[s].push_back(std::move(v));
    }
  }
  return RelStructure(a.language(), std::move(carrier), std::move(rels));
}

bool is_homomorphism(const FinFunction& h, const RelStructure& a, const RelStructure& b) {
  if (h.dom_size() != a.size() || h.cod_size() != b.size()) throw DomainMismatch("map does not match the carriers");
  if (!(a.language() == b.language())) throw DomainMismatch("structures over different languages");
  Tuple img;
  for (std::size_t s = 0; s < a.language().size(); ++s) {
    for (const auto& t : a.relation(s)) {
      img.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = h(t[i]);
      if (!b.contains(s, img)) return false;
    }
  }
  return true;
}

namespace {

struct Constraint {
  std::size_t symbol;
  const Tuple* tuple;
};

class HomSearch {
 public:
  HomSearch(const RelStructure& a, const RelStructure& b) : a_(a), b_(b), by_max_(a.size()) {
    for (std::size_t s = 0; s < a.language().size(); ++s) {
      for (const auto& t : a.relation(s)) {
        if (t.empty()) {
          if (!b.relation(s).empty()) continue;
          impossible_ = true;
          continue;
        }
        by_max_[*std::max_element(t.begin(), t.end())].push_back({s, &t});
      }
    }
  }

  bool impossible() const { return impossible_; }

  // Checks the constraints whose largest entry is j, given h[0..j].
  bool consistent(const std::vector<std::uint32_t>& h, std::size_t j, Tuple& scratch) const {
    for (const auto& c : by_max_[j]) {
      scratch.resize(c.tuple->size());
      for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = h[(*c.tuple)[i]];
      if (!b_.contains(c.symbol, scratch)) return false;
    }
    return true;
  }

  // Extends h from position `from` and appends every complete hom to out.
  void extend(std::vector<std::uint32_t>& h, std::size_t from, std::vector<FinFunction>& out) const {
    const std::size_t n = a_.size();
    const auto nb = static_cast<std::uint32_t>(b_.size());
    Tuple scratch;
    if (from == n) {
      out.emplace_back(h, b_.size());
      return;
    }
    std::size_t j = from;
    h[j] = 0;
    while (true) {
      if (h[j] < nb && consistent(h, j, scratch)) {
        if (j + 1 == n) {
          out.emplace_back(h, b_.size());
          ++h[j];
        } else {
          ++j;
          h[j] = 0;
        }
        continue;
      }
      if (h[j] < nb) {
        ++h[j];
        continue;
      }
      if (j == from) return;
      --j;
      ++h[j];
    }
  }

 private:
  const RelStructure& a_;
  const RelStructure& b_;
  std::vector<std::vector<Constraint>> by_max_;
  bool impossible_ = false;
};

}  // namespace

std::vector<FinFunction> hom_enum(const RelStructure& a, const RelStructure& b, const HomSearchOptions& options) {
  if (!(a.language() == b.language())) throw DomainMismatch("hom_enum over different languages");
  checked_power(b.size(), a.size(), options.cap);
  HomSearch search(a, b);
  if (search.impossible()) return {};
  if (a.size() == 0) return {FinFunction::empty(b.size())};
  if (b.size() == 0) return {};

  // Split on a prefix of the assignment; results concatenate in prefix order,
  // which keeps the output lexicographic.
  std::size_t depth = 0;
  std::uint64_t prefixes = 1;
  while (depth < a.size() && prefixes < 256) {
    prefixes *= b.size();
    ++depth;
  }
  std::vector<std::vector<FinFunction>> parts(prefixes);
  auto run = [&](std::uint64_t p) {
    std::vector<std::uint32_t> h(a.size(), 0);
    const auto pre = tuple_unrank(p, depth, b.size());
    Tuple scratch;
    for (std::size_t j = 0; j < depth; ++j) {
      h[j] = pre[j];
      if (!search.consistent(h, j, scratch)) return;
    }
    search.extend(h, depth, parts[p]);
  };
  const auto total = static_cast<std::int64_t>(prefixes);
  if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < total; ++p) run(static_cast<std::uint64_t>(p));
  } else {
    for (std::int64_t p = 0; p < total; ++p) run(static_cast<std::uint64_t>(p));
  }
  std::vector<FinFunction> out;
  for (auto& part : parts)
    for (auto& h : part) out.push_back(std::move(h));
  return out;
}

namespace reference {

std::vector<FinFunction> hom_enum_bruteforce(const RelStructure& a, const RelStructure& b, std::uint64_t cap) {
  if (!(a.language() == b.language())) throw DomainMismatch("hom_enum over different languages");
  checked_power(b.size(), a.size(), cap);
  std::vector<FinFunction> out;
  for (auto& h : enumerate_functions(a.size(), b.size()))
    if (is_homomorphism(h, a, b)) out.push_back(std::move(h));
  return out;
}

}  // namespace reference

std::string to_string(RigidityMode m) {
  switch (m) {
    case RigidityMode::Rigid: return "rigid";
    case RigidityMode::Lex: return "lex";
    case RigidityMode::InhabitedLex: return "inhabited-lex";
  }
  return "?";
}

RigidityMode parse_rigidity_mode(const std::string& s) {
  if (s == "rigid") return RigidityMode::Rigid;
  if (s == "lex") return RigidityMode::Lex;
  if (s == "inhabited-lex") return RigidityMode::InhabitedLex;
  throw PreconditionFailed("unknown rigidity mode '" + s + "' (expected rigid, lex or inhabited-lex)");
}

std::optional<std::size_t> projection_index(const FinFunction& h, std::size_t base, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    bool match = true;
    for (std::uint64_t x = 0; x < h.dom_size() && match; ++x) match = h(x) == tuple_unrank(x, n, base)[i];
    if (match) return i;
  }
  return std::nullopt;
}

nlohmann::json RigidityResult::to_json(const RelStructure& a) const {
  nlohmann::json j{{"mode", to_string(mode)},
                   {"holds", holds},
                   {"n_min", first_n},
                   {"n_max", n_max},
                   {"hom_counts", hom_counts},
                   {"bounded", "verdict covers arities " + std::to_string(first_n) + ".." + std::to_string(n_max) + " only"}};
  if (witness) {
    std::vector<std::string> table;
    for (std::size_t x = 0; x < witness->dom_size(); ++x) table.push_back(a.carrier()[(*witness)(x)]);
    j["witness"] = {{"arity", *witness_arity}, {"map", witness->to_string()}, {"values", table}};
  }
  return j;
}

namespace {

RigidityResult lex_check(const RelStructure& a, RigidityMode mode, std::size_t first, std::size_t n_max,
                         const HomSearchOptions& options) {
  RigidityResult r;
  r.mode = mode;
  r.first_n = first;
  r.n_max = n_max;
  r.holds = true;
  for (std::size_t n = first; n <= n_max; ++n) {
    const auto homs = hom_enum(power(a, n), a, options);
    r.hom_counts.push_back(homs.size());
    if (!r.holds) continue;
    for (const auto& h : homs) {
      if (!projection_index(h, a.size(), n)) {
        r.holds = false;
        r.witness = h;
        r.witness_arity = n;
        break;
      }
    }
  }
  return r;
}

}  // namespace

RigidityResult is_rigid(const RelStructure& a, const HomSearchOptions& options) {
  RigidityResult r;
  r.mode = RigidityMode::Rigid;
  r.holds = true;
  const auto homs = hom_enum(a, a, options);
  r.hom_counts.push_back(homs.size());
  const auto id = FinFunction::identity(a.size());
  for (const auto& h : homs) {
    if (h != id) {
      r.holds = false;
      r.witness = h;
      r.witness_arity = 1;
      break;
    }
  }
  return r;
}

RigidityResult is_lex_rigid(const RelStructure& a, std::size_t n_max, const HomSearchOptions& options) {
  return lex_check(a, RigidityMode::Lex, 0, n_max, options);
}

RigidityResult is_inhabited_lex_rigid(const RelStructure& a, std::size_t n_max, const HomSearchOptions& options) {
  if (n_max == 0) throw PreconditionFailed("inhabited-lex rigidity needs n_max >= 1");
  return lex_check(a, RigidityMode::InhabitedLex, 1, n_max, options);
}

RigidityResult check_rigidity(const RelStructure& a, RigidityMode mode, std::size_t n_max,
                              const HomSearchOptions& options) {
  switch (mode) {
    case RigidityMode::Rigid: return is_rigid(a, options);
    case RigidityMode::Lex: return is_lex_rigid(a, n_max, options);
    case RigidityMode::InhabitedLex: return is_inhabited_lex_rigid(a, n_max, options);
  }
  throw PreconditionFailed("unknown rigidity mode");
}

RelStructure fill_empty_relations(const RelStructure& a) {
  std::vector<RelSymbol> symbols;
  std::vector<std::vector<Tuple>> rels;
  for (std::size_t s = 0; s < a.language().size(); ++s) {
    const auto& sym = a.language()[s];
    if (sym.arity == 0) continue;
    symbols.push_back(sym);
    const auto rel = a.relation(s);
    if (!rel.empty()) {
      rels.emplace_back(rel.begin(), rel.end());
      continue;
    }
    const auto count = checked_power(a.size(), sym.arity, 1u << 24);
    std::vector<Tuple> full;
    for (std::uint64_t r = 0; r < count; ++r) full.push_back(tuple_unrank(r, sym.arity, a.size()));
    rels.push_back(std::move(full));
  }
  return RelStructure(RelLanguage(std::move(symbols)),
                      std::vector<std::string>(a.carrier().begin(), a.carrier().end()), std::move(rels));
}

RelStructure reduct(const RelStructure& a, const RelLanguage& language) {
  std::vector<std::vector<Tuple>> rels;
  for (const auto& sym : language.symbols()) {
    const auto i = a.language().index_of(sym.name);
    if (!i || a.language()[*i].arity != sym.arity) throw DomainMismatch("reduct: no symbol " + sym.name);
    const auto rel = a.relation(*i);
    rels.emplace_back(rel.begin(), rel.end());
  }
  return RelStructure(language, std::vector<std::string>(a.carrier().begin(), a.carrier().end()), std::move(rels));
}

RelStructure one_in_three_structure() {
  return RelStructure::with_size(RelLanguage({{"R", 3}}), 2, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
}

RelStructure two_point_no_relations() { return RelStructure::with_size(RelLanguage(), 2, {}); }

RelStructure singleton_no_relations() { return RelStructure::with_size(RelLanguage(), 1, {}); }

}  // namespace coend
