#include <gtest/gtest.h>

#include <map>
#include <random>

#include "coend/analyzer.hpp"
#include "coend/errors.hpp"
#include "coend/tensor.hpp"

using namespace coend;

namespace {

const PresheafEncoding& encoding() {
  static const auto e = build_presheaf_encoding(nat_order_structure(), 3);
  return e;
}

// Relabels the entries of both maps into [N] so the finite tensor can decide equality.
std::pair<Expression, Expression> to_finite(const NatExpression& a, const NatExpression& b, std::size_t& carrier) {
  std::map<Nat, std::uint32_t> ids;
  for (const auto* e : {&a, &b})
    for (auto x : e->map) ids.emplace(x, 0);
  std::uint32_t next = 0;
  for (auto& [x, id] : ids) id = next++;
  carrier = ids.size();
  Expression fa{{}, a.element};
  Expression fb{{}, b.element};
  for (auto x : a.map) fa.map.push_back(ids[x]);
  for (auto x : b.map) fb.map.push_back(ids[x]);
  return {fa, fb};
}

NatExpression random_expression(std::mt19937_64& rng, const TruncatedFunctor& f, std::size_t max_arity) {
  while (true) {
    const std::size_t k = rng() % (max_arity + 1);
    if (f.size(k) == 0) continue;
    NatExpression e;
    for (std::size_t i = 0; i < k; ++i) e.map.push_back(100 + rng() % 3);
    e.element = static_cast<std::uint32_t>(rng() % f.size(k));
    return e;
  }
}

class ShiftOracle : public MorphismOracle {
 public:
  explicit ShiftOracle(std::uint32_t tau) : tau_(tau) {}
  NatExpression evaluate(std::size_t, std::span<const Nat> xs) override {
    NatExpression e{{xs.begin(), xs.end()}, tau_};
    for (auto& x : e.map)
      if (x % 2) ++x;
    return e;
  }
  std::string describe() const override { return "shift"; }

 private:
  std::uint32_t tau_;
};

// Full subset of all coordinates, plus one extra coordinate once inputs get large.
class GrowingOracle : public MorphismOracle {
 public:
  NatExpression evaluate(std::size_t, std::span<const Nat> xs) override {
    NatExpression e{{xs.begin(), xs.end()}, 0};
    if (xs[0] >= (Nat{1} << 20)) e.map.push_back(xs[0] + 1);
    // pow labels subsets in bitmask order; the full subset is the last one.
    e.element = static_cast<std::uint32_t>((1u << e.map.size()) - 1);
    return e;
  }
  std::string describe() const override { return "growing"; }
};

}  // namespace

TEST(Normalize, AgreesWithFiniteTensorClasses) {
  std::mt19937_64 rng(21);
  for (const std::string spec : {"rep:0", "rep:1", "rep:2", "pow"}) {
    const auto f = builtin_functor(spec, 4);
    for (int trial = 0; trial < 400; ++trial) {
      const auto a = random_expression(rng, f, 3);
      const auto b = random_expression(rng, f, 3);
      std::size_t carrier = 0;
      const auto [fa, fb] = to_finite(a, b, carrier);
      const auto t = Tensor::compute(carrier, f);
      const bool same = t.lookup(fa) == t.lookup(fb);
      EXPECT_EQ(normalize(f, a) == normalize(f, b), same) << spec << " " << render(f, a) << " vs " << render(f, b);
      const auto na = normalize(f, a);
      EXPECT_EQ(na.arity(), t.length(fa)) << spec << " " << render(f, a);
      EXPECT_TRUE(std::is_sorted(na.map.begin(), na.map.end()));
      EXPECT_EQ(normalize(f, na), na);
    }
  }
}

TEST(Normalize, RejectsInvalidExpressions) {
  const auto f = builtin_functor("rep:1", 2);
  EXPECT_THROW(normalize(f, {{1, 2, 3}, 0}), BoundTooSmall);
  EXPECT_THROW(normalize(f, {{1, 2}, 2}), DomainMismatch);
}

TEST(Protocol, FormatAndParse) {
  EXPECT_EQ(format_request(2, std::vector<Nat>{5, 0, 17}), "2 5 0 17\n");
  EXPECT_EQ(format_request(0, std::vector<Nat>{}), "0\n");
  const auto e = parse_response("2 7 18446744073709551615 3");
  EXPECT_EQ(e.map, (std::vector<Nat>{7, 18446744073709551615ull}));
  EXPECT_EQ(e.element, 3u);
  EXPECT_EQ(parse_response("0 1").arity(), 0u);
  for (const std::string bad : {"", "2 1 2", "1  2 3", "1 2 3 ", "-1 2", "1 x 0", "1 2 4294967296", "1 18446744073709551616 0"})
    EXPECT_THROW(parse_response(bad), ProtocolError) << bad;
}

TEST(Analyzer, RecoversTauForRepresentables) {
  for (const std::string spec : {"rep:1", "rep:2"}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto f = builtin_functor(spec, 4);
      for (std::uint32_t tau = 0; tau < f.size(n); ++tau) {
        TensorOracle oracle(tau);
        AnalyzerOptions o;
        o.n = n;
        o.seed = 100 + tau;
        o.samples = 300;
        const auto a = analyze_morphism(oracle, encoding(), f, o);
        ASSERT_EQ(a.verdict, Verdict::Naive) << spec << " n=" << n << " tau=" << tau << " " << a.reason;
        EXPECT_EQ(*a.tau, tau);
        EXPECT_GT(a.equivariance_checks, 0u);
        // Le((xs) ⊗ τ) for distinct xs is the image size of τ as a map [s] -> [n].
        EXPECT_EQ(a.max_length, image(FinFunction::from_rank(tau, spec == "rep:1" ? 1 : 2, n)).size());
      }
    }
  }
}

TEST(Analyzer, PermutedInputsGiveReindexedTau) {
  const auto f = builtin_functor("rep:2", 4);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 2;
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    const FinFunction pi(perm, n);
    const auto tau = static_cast<std::uint32_t>(rng() % f.size(n));
    PermutedTensorOracle oracle(tau, pi);
    AnalyzerOptions o;
    o.n = n;
    o.seed = trial;
    o.samples = 200;
    const auto a = analyze_morphism(oracle, encoding(), f, o);
    ASSERT_EQ(a.verdict, Verdict::Naive) << a.reason;
    // rep:2 elements are maps t: [2] -> [n]; F(π)t = π o t.
    const auto t = FinFunction::from_rank(tau, 2, n);
    EXPECT_EQ(*a.tau, compose(pi, t).rank());
  }
}

TEST(Analyzer, TauDoesNotDependOnSeed) {
  const auto f = builtin_functor("pow", 3);
  for (std::uint32_t tau = 0; tau < f.size(2); ++tau) {
    std::optional<std::uint32_t> first;
    for (std::uint64_t seed : {1, 2, 3}) {
      TensorOracle oracle(tau);
      AnalyzerOptions o;
      o.n = 2;
      o.seed = seed;
      o.samples = 200;
      const auto a = analyze_morphism(oracle, encoding(), f, o);
      ASSERT_EQ(a.verdict, Verdict::Naive);
      if (!first) first = a.tau;
      EXPECT_EQ(a.tau, first);
    }
  }
}

TEST(Analyzer, NonEquivariantMapIsRefutedAtTheCheckedEdge) {
  const auto f = builtin_functor("rep:1", 3);
  ShiftOracle oracle(0);
  AnalyzerOptions o;
  o.n = 2;
  o.edges = {"p'^2_0"};
  const auto a = analyze_morphism(oracle, encoding(), f, o);
  EXPECT_EQ(a.verdict, Verdict::Refuted);
  EXPECT_EQ(a.witness["edge"], "p'^2_0");
  EXPECT_EQ(a.witness["input"].size(), 2u);
}

TEST(Analyzer, LengthAboveSampledMaximumIsInconclusive) {
  const auto f = builtin_functor("pow", 4);
  GrowingOracle oracle;
  AnalyzerOptions o;
  o.n = 2;
  o.edges = {"p^2_0"};
  o.samples = 100;
  const auto a = analyze_morphism(oracle, encoding(), f, o);
  EXPECT_EQ(a.verdict, Verdict::Inconclusive);
  EXPECT_EQ(a.max_length, 2u);
  EXPECT_TRUE(a.plateau);
}

TEST(Analyzer, LengthDoesNotGrowAlongPairingEdges) {
  const auto f = builtin_functor("rep:2", 4);
  const auto& p = encoding().presheaf;
  std::mt19937_64 rng(8);
  for (std::uint32_t tau = 0; tau < f.size(3); ++tau) {
    TensorOracle oracle(tau);
    for (int s = 0; s < 50; ++s) {
      const auto xs = sample_tuples(rng, 1, 3, Nat{1} << 20)[0];
      const auto t = normalize(f, oracle.evaluate(0, xs));
      for (std::size_t ei = 0; ei < p.graph.edges.size(); ++ei) {
        if (p.graph.edges[ei].kind != EdgeKind::Pairing) continue;
        NatExpression moved = t;
        for (auto& y : moved.map) y = p.actions[ei](y);
        EXPECT_LE(normalize(f, moved).arity(), t.arity());
      }
    }
  }
}

TEST(Analyzer, Preconditions) {
  TensorOracle oracle(0);
  AnalyzerOptions o;
  o.n = 1;
  EXPECT_THROW(analyze_morphism(oracle, encoding(), ine_functor(3), o), PreconditionFailed);
  o.n = 4;
  EXPECT_THROW(analyze_morphism(oracle, encoding(), builtin_functor("rep:1", 3), o), PreconditionFailed);
  o.n = 1;
  o.edges = {"nope"};
  EXPECT_THROW(analyze_morphism(oracle, encoding(), builtin_functor("rep:1", 3), o), PreconditionFailed);
}

TEST(Analyzer, InvalidOracleOutputIsAProtocolError) {
  TensorOracle oracle(7);
  AnalyzerOptions o;
  o.n = 1;
  EXPECT_THROW(analyze_morphism(oracle, encoding(), builtin_functor("rep:1", 3), o), ProtocolError);
}

TEST(Subprocess, BlackBoxRoundTrip) {
  const auto f = builtin_functor("rep:2", 3);
  SubprocessOracle oracle({COEND_BLACKBOX, "--tau", "5"});
  AnalyzerOptions o;
  o.n = 3;
  o.samples = 100;
  o.equivariance_samples = 10;
  const auto a = analyze_morphism(oracle, encoding(), f, o);
  ASSERT_EQ(a.verdict, Verdict::Naive) << a.reason;
  EXPECT_EQ(*a.tau, 5u);
}

TEST(Subprocess, ShiftedBlackBoxIsRefuted) {
  const auto f = builtin_functor("rep:1", 3);
  SubprocessOracle oracle({COEND_BLACKBOX, "--tau", "0", "--shift"});
  AnalyzerOptions o;
  o.n = 1;
  o.samples = 100;
  const auto a = analyze_morphism(oracle, encoding(), f, o);
  EXPECT_EQ(a.verdict, Verdict::Refuted);
}

TEST(Subprocess, MissingProgramIsAProtocolError) {
  SubprocessOracle oracle({"/nonexistent/black-box"});
  EXPECT_THROW(oracle.evaluate(0, std::vector<Nat>{1}), ProtocolError);
}
