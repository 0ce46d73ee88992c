#include "coend/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "coend/errors.hpp"

namespace coend {

namespace {

std::vector<std::uint64_t> arity_offsets(std::size_t carrier, const TruncatedFunctor& f, std::size_t bound) {
  std::vector<std::uint64_t> off(bound + 2, 0);
  for (std::size_t k = 0; k <= bound; ++k)
    off[k + 1] = off[k] + checked_power(carrier, k, 1ull << 32) * f.size(k);
  if (off[bound + 1] > (1ull << 31)) throw SearchTooLarge("too many expressions to intern");
  return off;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::uint64_t find(std::uint64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root survives, so every root is the least id of its class.
  void unite(std::uint64_t a, std::uint64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<std::uint64_t> parent_;
};

// Least expression id of the class of every expression of arity <= bound.
std::vector<std::uint64_t> partition_roots(std::size_t carrier, const TruncatedFunctor& f, std::size_t bound) {
  const auto off = arity_offsets(carrier, f, bound);
  UnionFind uf(off[bound + 1]);
  for (const auto& g : skeleton_generators(0, bound)) {
    const std::size_t j = g.dom_size();
    const std::size_t k = g.cod_size();
    const std::size_t fj = f.size(j);
    const std::size_t fk = f.size(k);
    if (fj == 0) continue;
    const auto act_g = f.action(j, k, g.rank());
    const std::uint64_t maps = checked_power(carrier, k);
    std::vector<std::uint32_t> fg(j);
    for (std::uint64_t r = 0; r < maps; ++r) {
      const auto m = tuple_unrank(r, k, carrier);
      for (std::size_t i = 0; i < j; ++i) fg[i] = m[g(i)];
      const std::uint64_t left = off[j] + tuple_rank(fg, carrier) * fj;
      const std::uint64_t right = off[k] + r * fk;
      for (std::uint32_t s = 0; s < fj; ++s) uf.unite(left + s, right + act_g[s]);
    }
  }
  std::vector<std::uint64_t> roots(off[bound + 1]);
  for (std::uint64_t i = 0; i < roots.size(); ++i) roots[i] = uf.find(i);
  return roots;
}

std::uint64_t image_mask(const Expression& e) {
  std::uint64_t m = 0;
  for (auto x : e.map) m |= 1ull << x;
  return m;
}

// φ with f = g o φ and F(φ)σ = τ, given both maps injective with equal images.
bool related_by_bijection(const TruncatedFunctor& fun, const Expression& a, const Expression& b) {
  if (a.arity() != b.arity() || image_mask(a) != image_mask(b)) return false;
  std::vector<std::uint32_t> phi(a.arity());
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto it = std::find(b.map.begin(), b.map.end(), a.map[i]);
    if (it == b.map.end()) return false;
    phi[i] = static_cast<std::uint32_t>(it - b.map.begin());
  }
  const FinFunction p(std::move(phi), b.arity());
  if (!is_injective(p)) return false;
  return fun.act(p, a.element) == b.element;
}

}  // namespace

Tensor Tensor::compute(std::size_t carrier_size, const TruncatedFunctor& f) {
  const std::size_t base = required_bound(carrier_size);
  if (f.bound() < base) {
    throw BoundTooSmall("tensor over a carrier of size " + std::to_string(carrier_size) + " needs functor bound >= " +
                        std::to_string(base) + ", got " + std::to_string(f.bound()));
  }
  if (carrier_size > 64) throw PreconditionFailed("carrier sizes above 64 are not supported");

  Tensor t;
  t.carrier_size_ = carrier_size;
  t.functor_ = f;
  t.stability_.base_bound = base;

  std::size_t current = base;
  auto roots = partition_roots(carrier_size, f, current);
  int streak = 0;
  for (std::size_t b = current + 1; b <= f.bound() && streak < 2; ++b) {
    auto next = partition_roots(carrier_size, f, b);
    t.stability_.compared_bounds.push_back(b);
    if (std::equal(roots.begin(), roots.end(), next.begin())) {
      ++streak;
    } else {
      streak = 0;
      current = b;
      roots = std::move(next);
    }
  }
  t.stability_.working_bound = current;
  t.stability_.stable = streak >= 2;
  t.stability_.flagged = current > std::max(carrier_size + 2, base);

  t.offsets_ = arity_offsets(carrier_size, f, current);
  std::vector<std::uint64_t> distinct_roots(roots);
  std::sort(distinct_roots.begin(), distinct_roots.end());
  distinct_roots.erase(std::unique(distinct_roots.begin(), distinct_roots.end()), distinct_roots.end());

  t.class_of_.resize(roots.size());
  std::vector<std::uint64_t> counts(distinct_roots.size(), 0);
  for (std::uint64_t i = 0; i < roots.size(); ++i) {
    const auto c = static_cast<std::uint32_t>(
        std::lower_bound(distinct_roots.begin(), distinct_roots.end(), roots[i]) - distinct_roots.begin());
    t.class_of_[i] = c;
    ++counts[c];
  }
  t.member_offsets_.assign(distinct_roots.size() + 1, 0);
  for (std::size_t c = 0; c < counts.size(); ++c) t.member_offsets_[c + 1] = t.member_offsets_[c] + counts[c];
  t.member_ids_.resize(roots.size());
  std::vector<std::uint64_t> fill(t.member_offsets_.begin(), t.member_offsets_.end() - 1);
  for (std::uint64_t i = 0; i < roots.size(); ++i) t.member_ids_[fill[t.class_of_[i]]++] = i;

  for (std::size_t c = 0; c < distinct_roots.size(); ++c) {
    TensorClass tc;
    tc.id = static_cast<std::uint32_t>(c);
    tc.canonical = t.decode(distinct_roots[c]);
    tc.length = tc.canonical.arity();
    tc.size = counts[c];
    t.classes_.push_back(std::move(tc));
  }
  return t;
}

std::uint64_t Tensor::encode(const Expression& e) const {
  const std::size_t k = e.arity();
  if (k > bound()) {
    throw BoundTooSmall("expression of arity " + std::to_string(k) + " exceeds working bound " +
                        std::to_string(bound()));
  }
  for (auto x : e.map)
    if (x >= carrier_size_) throw DomainMismatch("expression entry outside the carrier");
  if (e.element >= functor_.size(k)) throw DomainMismatch("element outside F[" + std::to_string(k) + "]");
  return offsets_[k] + tuple_rank(e.map, carrier_size_) * functor_.size(k) + e.element;
}

Expression Tensor::decode(std::uint64_t id) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const std::size_t k = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const std::uint64_t local = id - offsets_[k];
  const std::size_t fk = functor_.size(k);
  return Expression{tuple_unrank(local / fk, k, carrier_size_), static_cast<std::uint32_t>(local % fk)};
}

std::uint32_t Tensor::lookup(const Expression& e) const { return class_of_[encode(e)]; }

std::vector<Expression> Tensor::members(std::uint32_t id) const {
  std::vector<Expression> out;
  for (auto i = member_offsets_.at(id); i < member_offsets_[id + 1]; ++i) out.push_back(decode(member_ids_[i]));
  return out;
}

std::vector<Expression> Tensor::minimal_expressions(std::uint32_t id) const {
  std::vector<Expression> out;
  const std::size_t len = cls(id).length;
  for (auto i = member_offsets_.at(id); i < member_offsets_[id + 1]; ++i) {
    auto e = decode(member_ids_[i]);
    if (e.arity() != len) break;
    out.push_back(std::move(e));
  }
  return out;
}

std::string Tensor::render(const Expression& e, std::span<const std::string> carrier_labels) const {
  std::string s = "(";
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (i) s += ',';
    s += carrier_labels.empty() ? std::to_string(e.map[i]) : carrier_labels[e.map[i]];
  }
  return s + ")⊗" + functor_.label(e.arity(), e.element);
}

std::uint32_t act(const FinFunction& g, const Tensor& source, const Tensor& target, std::uint32_t class_id) {
  if (g.dom_size() != source.carrier_size() || g.cod_size() != target.carrier_size())
    throw DomainMismatch("carrier map " + g.to_string() + " does not match the tensors");
  Expression e = source.cls(class_id).canonical;
  for (auto& x : e.map) x = g(x);
  return target.lookup(e);
}

FinFunction tensor_morphism(const Tensor& t, std::size_t n, std::uint32_t sigma) {
  if (n > t.bound()) {
    throw BoundTooSmall("-⊗σ with n = " + std::to_string(n) + " exceeds working bound " + std::to_string(t.bound()));
  }
  const auto count = checked_power(t.carrier_size(), n, 1u << 26);
  std::vector<std::uint32_t> values(count);
  for (std::uint64_t r = 0; r < count; ++r)
    values[r] = t.lookup(Expression{tuple_unrank(r, n, t.carrier_size()), sigma});
  return FinFunction(std::move(values), t.class_count());
}

PresheafTensor presheaf_tensor(const FinitePresheaf& p, const TruncatedFunctor& f) {
  PresheafTensor out;
  std::vector<PresheafObject> objects;
  for (const auto& o : p.objects()) {
    out.fibers.push_back(Tensor::compute(o.size(), f));
    const auto& t = out.fibers.back();
    PresheafObject po{o.name, {}};
    for (const auto& c : t.classes()) po.labels.push_back(t.render(c.canonical, o.labels));
    objects.push_back(std::move(po));
  }
  std::vector<PresheafEdge> edges;
  for (const auto& e : p.edges()) {
    const auto& src = out.fibers[e.source];
    const auto& dst = out.fibers[e.target];
    std::vector<std::uint32_t> values(src.class_count());
    for (std::uint32_t c = 0; c < values.size(); ++c) values[c] = act(e.action, src, dst, c);
    edges.push_back({e.name, e.source, e.target, FinFunction(std::move(values), dst.class_count())});
  }
  out.presheaf = FinitePresheaf(std::move(objects), std::move(edges));
  return out;
}

namespace {

struct ClassFindings {
  std::optional<nlohmann::json> non_injective;
  std::optional<nlohmann::json> comparison;
  std::optional<nlohmann::json> uniqueness;
};

ClassFindings inspect_class(const Tensor& t, std::uint32_t id) {
  ClassFindings out;
  const auto members = t.members(id);
  const auto& cls = t.cls(id);
  auto witness = [&](const Expression& a, const Expression& b) {
    return nlohmann::json{{"class", id},
                          {"length", cls.length},
                          {"minimal", t.render(a)},
                          {"other", t.render(b)}};
  };

  std::vector<const Expression*> minimal;
  for (const auto& m : members)
    if (m.arity() == cls.length) minimal.push_back(&m);

  for (const auto* m : minimal) {
    FinFunction fm(m->map, t.carrier_size());
    if (!is_injective(fm)) {
      out.non_injective = nlohmann::json{{"class", id}, {"minimal", t.render(*m)}};
      break;
    }
  }

  std::uint64_t common = ~0ull;
  for (const auto& m : members) common &= image_mask(m);
  for (const auto* m : minimal) {
    const auto im = image_mask(*m);
    if ((im & common) == im) continue;
    for (const auto& g : members) {
      if ((im & image_mask(g)) != im) {
        out.comparison = witness(*m, g);
        break;
      }
    }
    break;
  }

  for (std::size_t j = 1; j < minimal.size(); ++j) {
    if (!related_by_bijection(t.functor(), *minimal[0], *minimal[j])) {
      out.uniqueness = witness(*minimal[0], *minimal[j]);
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<CheckResult> verify_tensor_lemmas(const Tensor& t, const LemmaCheckOptions& options) {
  const std::size_t n = t.carrier_size();
  if (n > options.carrier_cap) {
    throw PreconditionFailed("carrier size " + std::to_string(n) + " exceeds cap " +
                             std::to_string(options.carrier_cap));
  }
  const auto& fun = t.functor();
  const bool in_image = is_in_essential_image(fun);
  const nlohmann::json context{{"carrier_size", n},
                               {"functor", fun.name()},
                               {"functor_bound", fun.bound()},
                               {"working_bound", t.bound()},
                               {"essential_image", in_image}};

  std::vector<ClassFindings> findings(t.class_count());
  const auto classes = static_cast<std::int64_t>(t.class_count());
  if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < classes; ++c) findings[c] = inspect_class(t, static_cast<std::uint32_t>(c));
  } else {
    for (std::int64_t c = 0; c < classes; ++c) findings[c] = inspect_class(t, static_cast<std::uint32_t>(c));
  }

  std::vector<CheckResult> out;
  auto first_of = [&](auto member, auto accept) -> std::optional<nlohmann::json> {
    for (std::size_t c = 0; c < findings.size(); ++c)
      if (accept(t.cls(static_cast<std::uint32_t>(c)).length) && findings[c].*member) return *(findings[c].*member);
    return std::nullopt;
  };
  auto make = [&](std::string name, std::optional<nlohmann::json> violation) {
    CheckResult r{std::move(name), Status::Pass, "", context};
    if (violation) {
      r.status = Status::Fail;
      r.detail["witness"] = *violation;
    }
    return r;
  };
  const auto any = [](std::size_t) { return true; };
  const auto long_only = [](std::size_t len) { return len > 1; };

  {
    CheckResult r{"partition_stability", Status::Pass, "", context};
    r.detail["compared_bounds"] = t.stability().compared_bounds;
    r.detail["flagged"] = t.stability().flagged;
    if (!t.stability().stable) {
      r.status = Status::Skipped;
      r.reason = "bound: functor bound " + std::to_string(fun.bound()) + " too small to confirm stabilization";
    } else if (t.stability().flagged) {
      r.reason = "stabilized only at bound " + std::to_string(t.bound()) + " > |X| + 2";
    }
    out.push_back(std::move(r));
  }

  out.push_back(make("minimal_expressions_injective", first_of(&ClassFindings::non_injective, any)));

  {
    std::optional<nlohmann::json> violation;
    const std::size_t max_k = std::min(n, t.bound());
    for (std::size_t k = 1; k <= max_k && !violation; ++k) {
      for (const auto& f : enumerate_functions(k, n)) {
        if (!is_injective(f)) continue;
        std::vector<std::uint32_t> seen;
        for (std::uint32_t s = 0; s < fun.size(k) && !violation; ++s) {
          const auto c = t.lookup(Expression{{f.values().begin(), f.values().end()}, s});
          for (std::uint32_t p = 0; p < seen.size(); ++p) {
            if (seen[p] == c) {
              violation = nlohmann::json{{"map", f.to_string()}, {"sigma", fun.label(k, p)}, {"tau", fun.label(k, s)}};
              break;
            }
          }
          seen.push_back(c);
        }
        if (violation) break;
      }
    }
    out.push_back(make("cancellation", violation));
  }

  {
    std::optional<nlohmann::json> violation;
    if (n <= t.bound()) {
      std::vector<std::uint32_t> id(n);
      std::iota(id.begin(), id.end(), 0u);
      std::vector<std::uint32_t> seen;
      for (std::uint32_t s = 0; s < fun.size(n) && !violation; ++s) {
        const auto c = t.lookup(Expression{id, s});
        if (std::find(seen.begin(), seen.end(), c) != seen.end())
          violation = nlohmann::json{{"tau", fun.label(n, s)}, {"class", c}};
        seen.push_back(c);
      }
    }
    out.push_back(make("co_yoneda_cancellation", violation));
  }

  out.push_back(make("comparison_length_gt_1", first_of(&ClassFindings::comparison, long_only)));
  out.push_back(make("uniqueness_length_gt_1", first_of(&ClassFindings::uniqueness, long_only)));

  const bool run_comparison_all = in_image;
  const bool run_uniqueness_all = in_image && n > 0;
  if (run_comparison_all) {
    out.push_back(make("comparison_all_lengths", first_of(&ClassFindings::comparison, any)));
  } else {
    out.push_back({"comparison_all_lengths", Status::Skipped, "precondition: F is not in the essential image of iota_*", context});
  }
  if (run_uniqueness_all) {
    out.push_back(make("uniqueness_all_lengths", first_of(&ClassFindings::uniqueness, any)));
  } else {
    out.push_back({"uniqueness_all_lengths", Status::Skipped,
                   in_image ? "precondition: carrier is empty" : "precondition: F is not in the essential image of iota_*",
                   context});
  }

  if (!run_comparison_all || !run_uniqueness_all) {
    CheckResult r{"low_length_exceptions", Status::Pass, "", context};
    nlohmann::json witnesses = nlohmann::json::array();
    for (std::size_t c = 0; c < findings.size(); ++c) {
      if (t.cls(static_cast<std::uint32_t>(c)).length > 1) continue;
      if (!run_comparison_all && findings[c].comparison) {
        auto w = *findings[c].comparison;
        w["kind"] = "comparison";
        witnesses.push_back(std::move(w));
      }
      if (!run_uniqueness_all && findings[c].uniqueness) {
        auto w = *findings[c].uniqueness;
        w["kind"] = "uniqueness";
        witnesses.push_back(std::move(w));
      }
    }
    if (!witnesses.empty()) {
      r.status = Status::Expected;
      r.reason = "counterexamples at length <= 1 outside the inhabited hypotheses";
      r.detail["witnesses"] = std::move(witnesses);
    }
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json class_table(const Tensor& t, std::span<const std::string> carrier_labels, bool with_minimal) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : t.classes()) {
    nlohmann::json row{{"id", c.id},
                       {"canonical", t.render(c.canonical, carrier_labels)},
                       {"length", c.length},
                       {"size", c.size}};
    if (with_minimal) {
      nlohmann::json mins = nlohmann::json::array();
      for (const auto& m : t.minimal_expressions(c.id)) mins.push_back(t.render(m, carrier_labels));
      row["minimal_expressions"] = std::move(mins);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace coend
