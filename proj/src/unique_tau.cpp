#include "coend/unique_tau.hpp"

#include <algorithm>
#include <atomic>
#include <map>

#include "coend/errors.hpp"
#include "coend/tensor.hpp"

namespace coend {

namespace {

void check_same_shape(const FinitePresheaf& s, const FinitePresheaf& t) {
  if (s.objects().size() != t.objects().size() || s.edges().size() != t.edges().size())
    throw DomainMismatch("presheaves over different graphs");
  for (std::size_t e = 0; e < s.edges().size(); ++e)
    if (s.edges()[e].source != t.edges()[e].source || s.edges()[e].target != t.edges()[e].target)
      throw DomainMismatch("edge " + s.edges()[e].name + " has different endpoints");
}

// Variables are the elements of s, object by object. The square of edge e at x
// relates variable a = (c, x) and b = (d, S(e)x): value[b] = T(e)(value[a]).
class NatTransSearch {
 public:
  NatTransSearch(const FinitePresheaf& s, const FinitePresheaf& t) : s_(s), t_(t) {
    for (std::size_t c = 0; c < s.objects().size(); ++c) {
      offsets_.push_back(domains_.size());
      for (std::size_t x = 0; x < s.size(c); ++x) domains_.push_back(static_cast<std::uint32_t>(t.size(c)));
    }
    offsets_.push_back(domains_.size());
    by_max_.resize(domains_.size());
    for (std::size_t e = 0; e < s.edges().size(); ++e) {
      const auto& se = s.edges()[e];
      for (std::uint32_t x = 0; x < s.size(se.source); ++x) {
        const std::size_t a = offsets_[se.source] + x;
        const std::size_t b = offsets_[se.target] + se.action(x);
        by_max_[std::max(a, b)].push_back({a, b, &t.edges()[e].action});
      }
    }
  }

  std::size_t variables() const { return domains_.size(); }
  std::uint32_t domain(std::size_t v) const { return domains_[v]; }
  bool empty_domain() const {
    return std::any_of(domains_.begin(), domains_.end(), [](auto d) { return d == 0; });
  }

  bool consistent(const std::vector<std::uint32_t>& h, std::size_t j) const {
    for (const auto& c : by_max_[j])
      if (h[c.b] != (*c.target_action)(h[c.a])) return false;
    return true;
  }

  NaturalTransformation unpack(const std::vector<std::uint32_t>& h) const {
    NaturalTransformation alpha;
    for (std::size_t c = 0; c + 1 < offsets_.size(); ++c)
      alpha.emplace_back(std::vector<std::uint32_t>(h.begin() + offsets_[c], h.begin() + offsets_[c + 1]), t_.size(c));
    return alpha;
  }

  // Extends h from position `from`; false once the shared node budget is spent.
  bool extend(std::vector<std::uint32_t>& h, std::size_t from, std::vector<NaturalTransformation>& out,
              std::atomic<std::uint64_t>& nodes, std::uint64_t budget) const {
    const std::size_t n = variables();
    if (from == n) {
      out.push_back(unpack(h));
      return true;
    }
    std::size_t j = from;
    h[j] = 0;
    std::uint64_t local = 0;
    while (true) {
      if (h[j] < domains_[j]) {
        if (++local == 4096) {
          if (nodes.fetch_add(local) + local > budget) return false;
          local = 0;
        }
        if (consistent(h, j)) {
          if (j + 1 == n) {
            out.push_back(unpack(h));
            ++h[j];
          } else {
            ++j;
            h[j] = 0;
          }
        } else {
          ++h[j];
        }
        continue;
      }
      if (j == from) break;
      --j;
      ++h[j];
    }
    return nodes.fetch_add(local) + local <= budget;
  }

 private:
  struct Square {
    std::size_t a;
    std::size_t b;
    const FinFunction* target_action;
  };
  const FinitePresheaf& s_;
  const FinitePresheaf& t_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> domains_;
  std::vector<std::vector<Square>> by_max_;
};

}  // namespace

bool is_natural(const FinitePresheaf& s, const FinitePresheaf& t, const NaturalTransformation& alpha) {
  check_same_shape(s, t);
  if (alpha.size() != s.objects().size()) throw DomainMismatch("wrong number of components");
  for (std::size_t c = 0; c < alpha.size(); ++c)
    if (alpha[c].dom_size() != s.size(c) || alpha[c].cod_size() != t.size(c))
      throw DomainMismatch("component " + s.objects()[c].name + " has the wrong type");
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    const auto& se = s.edges()[e];
    if (compose(alpha[se.target], se.action) != compose(t.edges()[e].action, alpha[se.source])) return false;
  }
  return true;
}

std::vector<NaturalTransformation> enumerate_natural_transformations(const FinitePresheaf& s, const FinitePresheaf& t,
                                                                     const NatTransOptions& options) {
  check_same_shape(s, t);
  NatTransSearch search(s, t);
  if (search.variables() == 0) return {search.unpack({})};
  if (search.empty_domain()) return {};

  // Split on a prefix of the assignment; parts concatenate in prefix order,
  // which keeps the output lexicographic.
  std::size_t depth = 0;
  std::uint64_t prefixes = 1;
  while (depth < search.variables() && prefixes < 256) prefixes *= search.domain(depth++);
  std::vector<std::vector<NaturalTransformation>> parts(prefixes);
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> exhausted{false};
  const auto total = static_cast<std::int64_t>(prefixes);
  auto run_at = [&](std::int64_t p) {
    if (exhausted.load(std::memory_order_relaxed)) return;
    const auto idx = static_cast<std::uint64_t>(p);
    std::vector<std::uint32_t> h(search.variables(), 0);
    std::uint64_t rest = idx;
    for (std::size_t j = depth; j-- > 0;) {
      h[j] = static_cast<std::uint32_t>(rest % search.domain(j));
      rest /= search.domain(j);
    }
    for (std::size_t j = 0; j < depth; ++j)
      if (!search.consistent(h, j)) return;
    if (!search.extend(h, depth, parts[idx], nodes, options.node_budget)) exhausted = true;
  };
  if (options.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < total; ++p) run_at(p);
  } else {
    for (std::int64_t p = 0; p < total; ++p) run_at(p);
  }
  if (exhausted) throw SearchTooLarge("natural transformation search exceeded " + std::to_string(options.node_budget) + " nodes");
  std::vector<NaturalTransformation> out;
  for (auto& part : parts)
    for (auto& a : part) out.push_back(std::move(a));
  return out;
}

namespace reference {

std::vector<NaturalTransformation> enumerate_natural_transformations_bruteforce(const FinitePresheaf& s,
                                                                                const FinitePresheaf& t,
                                                                                std::uint64_t cap) {
  check_same_shape(s, t);
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < s.objects().size(); ++c) {
    total *= checked_power(t.size(c), s.size(c), cap);
    if (total > cap) throw SearchTooLarge("brute-force enumeration over " + std::to_string(total) + " candidates");
  }
  std::vector<std::vector<FinFunction>> per_object;
  for (std::size_t c = 0; c < s.objects().size(); ++c) per_object.push_back(enumerate_functions(s.size(c), t.size(c)));
  std::vector<NaturalTransformation> out;
  for (std::uint64_t r = 0; r < total; ++r) {
    // Mixed radix with the first object most significant, matching lexicographic order.
    NaturalTransformation alpha(per_object.size());
    std::uint64_t rest = r;
    for (std::size_t c = per_object.size(); c-- > 0;) {
      alpha[c] = per_object[c][rest % per_object[c].size()];
      rest /= per_object[c].size();
    }
    if (is_natural(s, t, alpha)) out.push_back(std::move(alpha));
  }
  return out;
}

}  // namespace reference

std::size_t unique_tau_bound(const FinitePresheaf& p, std::size_t n_max) {
  std::size_t largest = 0;
  for (const auto& o : p.objects()) largest = std::max(largest, o.size());
  return std::max(Tensor::required_bound(largest), n_max) + 2;
}

std::vector<CheckResult> check_unique_tau(const FinitePresheaf& p, const std::vector<TruncatedFunctor>& functors,
                                          const UniqueTauOptions& options) {
  if (!check_inhabited(p)) throw PreconditionFailed("presheaf is not inhabited");
  for (const auto& f : functors)
    if (!is_in_essential_image(f)) throw PreconditionFailed(f.name() + " is not in the essential image");

  std::vector<CheckResult> out;
  bool holds = true;
  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : functors) {
    names.push_back(f.name());
    const auto pt = presheaf_tensor(p, f);
    for (std::size_t n = 1; n <= options.n_max; ++n) {
      const auto pn = power(p, n);
      const auto alphas = enumerate_natural_transformations(pn, pt.presheaf, options.search);

      std::map<NaturalTransformation, std::vector<std::uint32_t>> naive;
      for (std::uint32_t tau = 0; tau < f.size(n); ++tau) {
        NaturalTransformation comps;
        for (const auto& fiber : pt.fibers) comps.push_back(tensor_morphism(fiber, n, tau));
        naive[comps].push_back(tau);
      }

      auto describe = [&](const NaturalTransformation& alpha) {
        nlohmann::json comps = nlohmann::json::object();
        for (std::size_t c = 0; c < alpha.size(); ++c) {
          nlohmann::json values = nlohmann::json::array();
          for (auto v : alpha[c].values()) values.push_back(pt.presheaf.objects()[c].labels[v]);
          comps[p.objects()[c].name] = {{"map", alpha[c].to_string()}, {"values", values}};
        }
        return comps;
      };

      CheckResult r{"unique_tau/" + f.name() + "/n=" + std::to_string(n), Status::Pass, "", {}};
      nlohmann::json witnesses = nlohmann::json::array();
      std::size_t offending = 0;
      std::size_t found_naive = 0;
      for (const auto& alpha : alphas) {
        auto it = naive.find(alpha);
        if (it != naive.end() && it->second.size() == 1) {
          ++found_naive;
          continue;
        }
        ++offending;
        if (witnesses.size() >= options.witness_limit) continue;
        nlohmann::json w{{"components", describe(alpha)}};
        if (it == naive.end()) {
          w["kind"] = "not_of_the_form_tensor";
        } else {
          w["kind"] = "tau_not_unique";
          nlohmann::json taus = nlohmann::json::array();
          for (auto tau : it->second) taus.push_back(f.label(n, tau));
          w["taus"] = taus;
        }
        witnesses.push_back(std::move(w));
      }
      // Every −⊗τ is natural, so each must show up in the enumeration.
      std::size_t missing = 0;
      for (const auto& [comps, taus] : naive)
        if (!std::binary_search(alphas.begin(), alphas.end(), comps)) missing += taus.size();

      r.detail = {{"transformations", alphas.size()},
                  {"naive_unique", found_naive},
                  {"offending", offending},
                  {"witnesses", witnesses}};
      if (missing) {
        r.status = Status::Fail;
        r.reason = std::to_string(missing) + " tensor maps missing from the enumeration";
      } else if (offending) {
        r.status = Status::Fail;
        r.reason = std::to_string(offending) + " natural transformations are not -⊗tau for a unique tau";
      }
      holds = holds && r.status == Status::Pass;
      out.push_back(std::move(r));
    }
  }
  CheckResult summary{"inhabited_topos_rigid", holds ? Status::Pass : Status::Fail,
                      holds ? "" : "some natural transformation is not -⊗tau for a unique tau",
                      {{"up_to", {{"functors", names}, {"n_max", options.n_max}}}}};
  out.push_back(std::move(summary));
  return out;
}

}  // namespace coend
