// One PASS/FAIL line per acceptance criterion. Exit status 1 if any line fails.

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "coend/analyzer.hpp"
#include "coend/encoding.hpp"
#include "coend/pairing.hpp"
#include "coend/relational.hpp"
#include "coend/tensor.hpp"
#include "coend/unique_tau.hpp"
#include "coend/verify.hpp"

using namespace coend;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool c, const std::string& what) {
    if (!c && ok) note = what;
    ok = ok && c;
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit_ms, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.note = std::string("exception: ") + e.what();
  }
  const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
  if (limit_ms > 0 && ms.count() > limit_ms) o.require(false, "over time limit of " + std::to_string(limit_ms / 1000) + " s");
  std::printf("criterion %2d: %s  %s  (%.0f ms)%s%s\n", id, o.ok ? "PASS" : "FAIL", title, ms.count(),
              o.note.empty() ? "" : "  -- ", o.note.c_str());
  std::fflush(stdout);
  failures += !o.ok;
}

const CheckResult* find(const std::vector<CheckResult>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

int main() {
  criterion(1, "model case: |X (x) y(S)| = |X|^|S|, length = |Im| of the composite", 5000, [] {
    Outcome o;
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t s = 0; s <= 2; ++s) {
        const auto t = Tensor::compute(n, representable(s, Tensor::required_bound(n) + 2));
        const std::string at = " (|X|=" + std::to_string(n) + ", |S|=" + std::to_string(s) + ")";
        o.require(t.class_count() == checked_power(n, s), "class count" + at);
        // Oracle: the class of (f, σ) corresponds to the composite f o σ : S -> X.
        std::set<std::vector<std::uint32_t>> composites;
        for (const auto& c : t.classes()) {
          const auto sigma = FinFunction::from_rank(c.canonical.element, s, c.canonical.arity());
          const FinFunction f(c.canonical.map, n);
          const auto comp = compose(f, sigma);
          o.require(c.length == image(comp).size(), "length" + at);
          for (const auto& m : t.members(c.id)) {
            const auto other = compose(FinFunction(m.map, n), FinFunction::from_rank(m.element, s, m.arity()));
            o.require(other == comp, "class mixes composites" + at);
          }
          composites.emplace(comp.values().begin(), comp.values().end());
        }
        o.require(composites.size() == t.class_count(), "composite not injective on classes" + at);
      }
    return o;
  });

  criterion(2, "model case: |X (x) P| = 2^|X|, length of the class of S = |S|", 5000, [] {
    Outcome o;
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto t = Tensor::compute(n, power_set_functor(Tensor::required_bound(n) + 2));
      o.require(t.class_count() == (1u << n), "class count at |X|=" + std::to_string(n));
      std::set<std::uint32_t> images;
      for (const auto& c : t.classes()) {
        std::uint32_t img = 0;
        for (std::size_t i = 0; i < c.canonical.arity(); ++i)
          if (c.canonical.element >> i & 1u) img |= 1u << c.canonical.map[i];
        o.require(c.length == static_cast<std::size_t>(std::popcount(img)), "length at |X|=" + std::to_string(n));
        images.insert(img);
      }
      o.require(images.size() == t.class_count(), "image map not injective");
    }
    return o;
  });

  criterion(3, "exceptional functors: ine at |X|=2, ine2 at |X|=1", 0, [] {
    Outcome o;
    const auto ine = Tensor::compute(2, ine_functor(Tensor::required_bound(2) + 2));
    o.require(ine.class_count() == 1, "ine: one class");
    o.require(ine.class_count() == 1 && ine.cls(0).length == 1, "ine: Le = 1");
    o.require(ine.class_count() == 1 && ine.minimal_expressions(0).size() >= 2, "ine: >= 2 minimal expressions");
    const auto ine2 = Tensor::compute(1, ine2_functor(Tensor::required_bound(1) + 2));
    std::size_t zero_classes = 0;
    for (const auto& c : ine2.classes())
      if (c.length == 0) {
        ++zero_classes;
        o.require(ine2.minimal_expressions(c.id).size() == 2, "ine2: length-0 class needs exactly 2 minimal expressions");
      }
    o.require(zero_classes == 1, "ine2: one length-0 class");
    return o;
  });

  criterion(4, "lemma checks for all built-in functors, |X| <= 3, no unexpected counterexample", 60000, [] {
    Outcome o;
    for (const std::string spec : {"rep:0", "rep:1", "rep:2", "pow", "ine", "ine2"}) {
      const bool exceptional = spec == "ine" || spec == "ine2";
      for (std::size_t n = 0; n <= 3; ++n) {
        const auto t = Tensor::compute(n, builtin_functor(spec, Tensor::required_bound(n) + 2));
        for (const auto& r : verify_tensor_lemmas(t)) {
          const std::string at = spec + " |X|=" + std::to_string(n) + " " + r.name;
          o.require(r.status != Status::Fail, "counterexample: " + at);
          o.require(r.status != Status::Expected || exceptional, "EXPECTED outside the exceptional functors: " + at);
          o.require(r.status != Status::Skipped || exceptional || r.name == "uniqueness_all_lengths",
                    "skipped: " + at);
        }
      }
    }
    return o;
  });

  criterion(5, "essential image: rep(s, N) for s <= N <= 4 in, ine and ine2 out", 0, [] {
    Outcome o;
    // Functor bounds start at 2; N = 0, 1 are not representable as truncated functors here.
    for (std::size_t bound = 2; bound <= 4; ++bound) {
      for (std::size_t s = 0; s <= bound; ++s)
        o.require(is_in_essential_image(representable(s, bound)), "rep " + std::to_string(s) + "@" + std::to_string(bound));
      o.require(!is_in_essential_image(ine_functor(bound)), "ine@" + std::to_string(bound));
      o.require(!is_in_essential_image(ine2_functor(bound)), "ine2@" + std::to_string(bound));
    }
    return o;
  });

  criterion(6, "rigidity: 1-in-3 inhabited-lex-rigid to n=3, bare two-point set refuted by a constant", 10000, [] {
    Outcome o;
    const auto a = one_in_three_structure();
    const auto r = is_inhabited_lex_rigid(a, 3);
    o.require(r.holds, "1-in-3 refuted");
    // Oracle: filter all 2^8 functions {0,1}^3 -> {0,1} against the relation.
    std::size_t polymorphisms = 0;
    const std::uint32_t rows[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (std::uint32_t f = 0; f < 256; ++f) {
      bool ok = true;
      for (std::uint32_t choice = 0; choice < 27 && ok; ++choice) {
        std::uint32_t cols[3] = {0, 0, 0}, c = choice;
        for (std::size_t i = 0; i < 3; ++i, c /= 3)
          for (std::size_t j = 0; j < 3; ++j) cols[j] |= rows[c % 3][j] << i;
        std::uint32_t out[3];
        for (std::size_t j = 0; j < 3; ++j) out[j] = f >> cols[j] & 1u;
        ok = out[0] + out[1] + out[2] == 1;
      }
      polymorphisms += ok;
    }
    o.require(polymorphisms == 3, "oracle found " + std::to_string(polymorphisms) + " ternary polymorphisms");
    o.require(r.hom_counts == std::vector<std::size_t>{1, 2, 3}, "hom counts");
    const auto b = two_point_no_relations();
    const auto w = is_inhabited_lex_rigid(b, 3);
    o.require(!w.holds && w.witness && image(*w.witness).size() == 1, "two-point: no constant witness");
    return o;
  });

  criterion(7, "Cantor pairing round trip on 10^4 samples per n <= 4, injective on samples", 0, [] {
    Outcome o;
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto tuples = sample_tuples(rng, 10000, n, max_safe_coordinate(n));
      std::map<Nat, std::vector<Nat>> seen;
      const CantorPairingSystem ps({n});
      for (const auto& xs : tuples) {
        const Nat z = pair_n(xs);
        o.require(unpair_n(z, n) == xs, "round trip n=" + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) o.require(ps.project(n, i, z) == xs[i], "component n=" + std::to_string(n));
        const auto [it, fresh] = seen.emplace(z, xs);
        o.require(fresh || it->second == xs, "collision n=" + std::to_string(n));
      }
    }
    return o;
  });

  criterion(8, "encoding laws (p', s', retraction) on 1000 seeded samples", 0, [] {
    Outcome o;
    const auto e = build_presheaf_encoding(nat_order_structure(), 3);
    const auto rs = check_encoding(e, 1000, 8);
    std::size_t p_prime = 0, s_prime = 0, retraction = 0;
    for (const auto& r : rs) {
      o.require(r.status == Status::Pass, r.name);
      p_prime += r.name.rfind("p_prime_law/", 0) == 0;
      s_prime += r.name.rfind("s_prime_law/", 0) == 0;
      retraction += r.name.rfind("retraction_law/", 0) == 0;
    }
    const std::size_t symbols = e.structure.relations.size();
    o.require(p_prime == 3 && s_prime == symbols && retraction == symbols, "missing law checks");
    return o;
  });

  criterion(9, "analyzer returns NAIVE(tau) for 10 random tau per F in {rep:1, rep:2}, n <= 3", 30000, [] {
    Outcome o;
    const auto e = build_presheaf_encoding(nat_order_structure(), 3);
    std::mt19937_64 rng(9);
    for (const std::string spec : {"rep:1", "rep:2"}) {
      const auto f = builtin_functor(spec, 4);
      for (std::size_t n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 10; ++trial) {
          const auto tau = static_cast<std::uint32_t>(rng() % f.size(n));
          TensorOracle oracle(tau);
          AnalyzerOptions opt;
          opt.n = n;
          opt.seed = rng();
          const auto a = analyze_morphism(oracle, e, f, opt);
          const std::string at = spec + " n=" + std::to_string(n) + " tau=" + f.label(n, tau);
          o.require(a.verdict == Verdict::Naive && a.tau == tau, "wrong verdict at " + at + ": " + a.reason);
          o.require(a.equivariance_checks > 0, "no equivariance checks at " + at);
        }
    }
    return o;
  });

  criterion(10, "unique tau: two-point constant fails with the swap, 1-in-3 passes for rep:1, rep:2, n <= 2", 0, [] {
    Outcome o;
    const auto q = constant_presheaf(2);
    const auto bad = check_unique_tau(q, {builtin_functor("rep:1", unique_tau_bound(q, 1))}, {.n_max = 1});
    const auto* r = find(bad, "unique_tau/rep:1/n=1");
    o.require(r && r->status == Status::Fail, "two-point did not fail");
    bool swap = false;
    if (r)
      for (const auto& w : r->detail["witnesses"]) swap = swap || w["components"]["c"]["map"] == "[1,0]:[2]->[2]";
    o.require(swap, "swap witness missing");
    const auto p = one_in_three_presheaf();
    const auto bound = unique_tau_bound(p, 2);
    for (const auto& x : check_unique_tau(p, {builtin_functor("rep:1", bound), builtin_functor("rep:2", bound)}, {.n_max = 2}))
      o.require(x.status == Status::Pass, "1-in-3: " + x.name);
    return o;
  });

  criterion(11, "verify_all with a fixed seed is byte-identical without timing", 0, [] {
    Outcome o;
    VerifyConfig c;
    c.seed = 11;
    const auto a = verify_all(c).to_json(false).dump();
    const auto b = verify_all(c).to_json(false).dump();
    o.require(a == b, "reports differ");
    return o;
  });

  return failures == 0 ? 0 : 1;
}
