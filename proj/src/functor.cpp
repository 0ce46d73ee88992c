#include "coend/functor.hpp"

#include <algorithm>

#include "coend/errors.hpp"

namespace coend {

namespace detail {

std::shared_ptr<const FunctorTables> build_tables(std::string name, std::size_t bound,
                                                  std::size_t first, const LabelFn& labels,
                                                  const ActionFn& action) {
  if (bound < 2) throw PreconditionFailed("functor bound must be at least 2, got " + std::to_string(bound));
  auto t = std::make_shared<FunctorTables>();
  t->name = std::move(name);
  t->bound = bound;
  t->first = first;
  t->labels.resize(bound + 1);
  for (std::size_t k = first; k <= bound; ++k) t->labels[k] = labels(k);

  t->offsets.assign((bound + 1) * (bound + 1), 0);
  std::size_t total = 0;
  for (std::size_t k = first; k <= bound; ++k) {
    for (std::size_t l = first; l <= bound; ++l) {
      t->offsets[k * (bound + 1) + l] = total;
      total += checked_power(l, k) * t->size(k);
    }
  }
  t->data.resize(total);
  for (std::size_t k = first; k <= bound; ++k) {
    for (std::size_t l = first; l <= bound; ++l) {
      const std::uint64_t count = checked_power(l, k);
      const std::size_t fk = t->size(k);
      const std::size_t fl = t->size(l);
      for (std::uint64_t r = 0; r < count; ++r) {
        const auto g = FinFunction::from_rank(r, k, l);
        std::uint32_t* out = t->data.data() + t->offsets[k * (bound + 1) + l] + r * fk;
        for (std::uint32_t e = 0; e < fk; ++e) {
          const std::uint32_t v = action(g, e);
          if (v >= fl) {
            throw DomainMismatch("action of " + g.to_string() + " on element " + std::to_string(e) +
                                 " of " + t->name + " lands outside F[" + std::to_string(l) + "]");
          }
          out[e] = v;
        }
      }
    }
  }
  return t;
}

}  // namespace detail

std::string FunctorialityViolation::describe() const {
  if (!f) return "F(" + g.to_string() + ") is not the identity at element " + std::to_string(element);
  return "F(g o f) != F(g) o F(f) for g = " + g.to_string() + ", f = " + f->to_string() +
         " at element " + std::to_string(element);
}

std::vector<FinFunction> skeleton_generators(std::size_t first, std::size_t bound) {
  std::vector<FinFunction> gens;
  for (std::size_t k = first; k <= bound; ++k) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto v = FinFunction::identity(k);
      std::vector<std::uint32_t> w(v.values().begin(), v.values().end());
      std::swap(w[i], w[i + 1]);
      gens.emplace_back(std::move(w), k);
    }
    if (k >= 2 && k - 1 >= first) {
      std::vector<std::uint32_t> w(k);
      for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<std::uint32_t>(std::min(i, k - 2));
      gens.emplace_back(std::move(w), k - 1);
    }
    if (k + 1 <= bound) {
      auto v = FinFunction::identity(k);
      gens.emplace_back(std::vector<std::uint32_t>(v.values().begin(), v.values().end()), k + 1);
    }
  }
  return gens;
}

std::optional<FunctorialityViolation> find_functoriality_violation(const detail::FunctorTables& t) {
  const std::size_t n = t.bound;
  for (std::size_t k = t.first; k <= n; ++k) {
    const auto id = FinFunction::identity(k);
    const auto* tab = t.table(k, k, id.rank());
    for (std::uint32_t e = 0; e < t.size(k); ++e)
      if (tab[e] != e) return FunctorialityViolation{id, std::nullopt, e};
  }
  const auto gens = skeleton_generators(t.first, n);
  for (std::size_t k = t.first; k <= n; ++k) {
    for (std::size_t l = t.first; l <= n; ++l) {
      const std::uint64_t count = checked_power(l, k);
      for (std::uint64_t r = 0; r < count; ++r) {
        const auto f = FinFunction::from_rank(r, k, l);
        const auto* tf = t.table(k, l, r);
        for (const auto& g : gens) {
          if (g.dom_size() != l) continue;
          const auto gf = compose(g, f);
          const auto* tg = t.table(l, g.cod_size(), g.rank());
          const auto* tgf = t.table(k, g.cod_size(), gf.rank());
          for (std::uint32_t e = 0; e < t.size(k); ++e)
            if (tgf[e] != tg[tf[e]]) return FunctorialityViolation{g, f, e};
        }
      }
    }
  }
  return std::nullopt;
}

EssentialImageWitness essential_image_witness(const TruncatedFunctor& f) {
  EssentialImageWitness w;
  const FinFunction unit = FinFunction::empty(1);
  const FinFunction d0({0}, 2);
  const FinFunction d1({1}, 2);
  for (std::uint32_t e = 0; e < f.size(0); ++e) w.comparison.push_back(f.act(unit, e));
  for (std::uint32_t x = 0; x < f.size(1); ++x)
    if (f.act(d0, x) == f.act(d1, x)) w.equalizer.push_back(x);

  auto sorted = w.comparison;
  std::sort(sorted.begin(), sorted.end());
  w.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  // The comparison always lands in the equalizer, since d0 and d1 agree after [0] -> [1].
  w.surjective = sorted == w.equalizer;
  return w;
}

bool is_in_essential_image(const TruncatedFunctor& f) { return essential_image_witness(f).in_image(); }

InhabitedTruncatedFunctor restrict_to_inhabited(const TruncatedFunctor& f) {
  return InhabitedTruncatedFunctor::generate(
      f.name() + "|inhabited", f.bound(),
      [f](std::size_t k) { return std::vector<std::string>(f.labels(k).begin(), f.labels(k).end()); },
      [f](const FinFunction& g, std::uint32_t e) { return f.act(g, e); });
}

TruncatedFunctor iota_star(const InhabitedTruncatedFunctor& f) {
  const FinFunction d0({0}, 2);
  const FinFunction d1({1}, 2);
  std::vector<std::uint32_t> eq;
  for (std::uint32_t x = 0; x < f.size(1); ++x)
    if (f.act(d0, x) == f.act(d1, x)) eq.push_back(x);

  auto labels = [f, eq](std::size_t k) {
    if (k > 0) return std::vector<std::string>(f.labels(k).begin(), f.labels(k).end());
    std::vector<std::string> out;
    for (auto x : eq) out.push_back(f.label(1, x));
    return out;
  };
  auto action = [f, eq](const FinFunction& g, std::uint32_t e) -> std::uint32_t {
    if (g.dom_size() > 0) return f.act(g, e);
    if (g.cod_size() == 0) return e;
    // Any [1] -> [l] gives the same value on an equalizer element.
    return f.act(FinFunction(std::vector<std::uint32_t>{0}, g.cod_size()), eq[e]);
  };
  return TruncatedFunctor::generate("iota_star(" + f.name() + ")", f.bound(), labels, action);
}

namespace {

std::string values_label(std::span<const std::uint32_t> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace

TruncatedFunctor representable(std::size_t s, std::size_t bound) {
  auto labels = [s](std::size_t k) {
    std::vector<std::string> out;
    const auto count = checked_power(k, s);
    for (std::uint64_t r = 0; r < count; ++r) out.push_back(values_label(FinFunction::from_rank(r, s, k).values()));
    return out;
  };
  auto action = [s](const FinFunction& g, std::uint32_t e) {
    const auto h = FinFunction::from_rank(e, s, g.dom_size());
    return static_cast<std::uint32_t>(compose(g, h).rank());
  };
  return TruncatedFunctor::generate("rep:" + std::to_string(s), bound, labels, action);
}

TruncatedFunctor power_set_functor(std::size_t bound) {
  if (bound > 20) throw PreconditionFailed("power set functor bound too large");
  auto labels = [](std::size_t k) {
    std::vector<std::string> out;
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      std::string s = "{";
      bool first = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(mask >> i & 1u)) continue;
        if (!first) s += ',';
        s += std::to_string(i);
        first = false;
      }
      out.push_back(s + "}");
    }
    return out;
  };
  auto action = [](const FinFunction& g, std::uint32_t mask) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < g.dom_size(); ++i)
      if (mask >> i & 1u) out |= 1u << g(i);
    return out;
  };
  return TruncatedFunctor::generate("pow", bound, labels, action);
}

TruncatedFunctor ine_functor(std::size_t bound) {
  return TruncatedFunctor::generate(
      "ine", bound,
      [](std::size_t k) { return k == 0 ? std::vector<std::string>{} : std::vector<std::string>{"*"}; },
      [](const FinFunction&, std::uint32_t) { return 0u; });
}

TruncatedFunctor ine2_functor(std::size_t bound) {
  return TruncatedFunctor::generate(
      "ine2", bound,
      [](std::size_t k) { return k == 0 ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{"*"}; },
      [](const FinFunction& g, std::uint32_t e) { return g.cod_size() == 0 ? e : 0u; });
}

TruncatedFunctor builtin_functor(const std::string& spec, std::size_t bound) {
  if (spec == "pow") return power_set_functor(bound);
  if (spec == "ine") return ine_functor(bound);
  if (spec == "ine2") return ine2_functor(bound);
  if (spec.rfind("rep:", 0) == 0) {
    const std::string digits = spec.substr(4);
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw PreconditionFailed("bad representable spec '" + spec + "'");
    }
    return representable(std::stoul(digits), bound);
  }
  throw PreconditionFailed("unknown functor '" + spec + "' (expected rep:<s>, pow, ine, ine2)");
}

}  // namespace coend
