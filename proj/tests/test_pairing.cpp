#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coend/errors.hpp"
#include "coend/nat_structure.hpp"
#include "coend/pairing.hpp"

using namespace coend;

namespace {

// Walks the Cantor enumeration diagonal by diagonal: (0,0), (1,0), (0,1), (2,0), ...
std::vector<std::pair<Nat, Nat>> cantor_walk(std::size_t count) {
  std::vector<std::pair<Nat, Nat>> out;
  for (Nat s = 0; out.size() < count; ++s)
    for (Nat b = 0; b <= s && out.size() < count; ++b) out.emplace_back(s - b, b);
  return out;
}

}  // namespace

TEST(Pairing, ClosedFormMatchesEnumeration) {
  const auto walk = cantor_walk(200000);
  for (Nat z = 0; z < walk.size(); ++z) {
    EXPECT_EQ(pair2(walk[z].first, walk[z].second), z);
    EXPECT_EQ(unpair2(z), walk[z]);
  }
  EXPECT_EQ(pair2(0, 0), 0u);
}

TEST(Pairing, RoundTripLargeValues) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100000; ++i) {
    const Nat z = rng();
    const auto [a, b] = unpair2(z);
    EXPECT_EQ(pair2(a, b), z);
  }
  EXPECT_EQ(unpair2(UINT64_MAX).first + unpair2(UINT64_MAX).second > 0, true);
  EXPECT_THROW(pair2(UINT64_MAX, 1), Overflow);
  EXPECT_THROW(pair2(Nat{1} << 33, Nat{1} << 33), Overflow);
}

TEST(Pairing, NaryRoundTripAndInjectivity) {
  std::mt19937_64 rng(2);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto samples = sample_tuples(rng, 10000, n, Nat{1} << 40);
    std::set<Nat> codes;
    std::set<std::vector<Nat>> distinct(samples.begin(), samples.end());
    for (const auto& xs : samples) {
      const Nat z = pair_n(xs);
      EXPECT_EQ(unpair_n(z, n), xs);
      codes.insert(z);
    }
    EXPECT_EQ(codes.size(), distinct.size());
    for (int i = 0; i < 10000; ++i) {
      const Nat z = rng();
      EXPECT_EQ(pair_n(unpair_n(z, n)), z);
    }
  }
  const std::vector<Nat> one{42};
  EXPECT_EQ(pair_n(one), 42u);
  EXPECT_THROW(unpair_n(3, 0), PreconditionFailed);
}

TEST(Pairing, MaxSafeCoordinate) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Nat m = max_safe_coordinate(n);
    const std::vector<Nat> ok(n, m);
    EXPECT_NO_THROW(pair_n(ok));
    const std::vector<Nat> bad(n, m + 1);
    EXPECT_THROW(pair_n(bad), Overflow);
  }
  EXPECT_EQ(max_safe_coordinate(1), UINT64_MAX);
}

TEST(Pairing, SurjectiveOnInitialSegment) {
  // Every z below a bound is hit by exactly one pair, and the pairs are all small.
  for (std::size_t n = 2; n <= 4; ++n) {
    std::set<std::vector<Nat>> seen;
    for (Nat z = 0; z < 10000; ++z) {
      auto t = unpair_n(z, n);
      EXPECT_TRUE(seen.insert(t).second);
      EXPECT_EQ(pair_n(t), z);
    }
  }
}

TEST(Pairing, CantorSystem) {
  const CantorPairingSystem ps({3, 1, 2, 2});
  EXPECT_EQ(ps.arities(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(ps.project(1, 0, 77), 77u);
  const std::vector<Nat> xs{5, 9, 2};
  const Nat x = ps.assemble(xs);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(ps.project(3, i, x), xs[i]);
  EXPECT_THROW(ps.project(4, 0, 1), PreconditionFailed);
  EXPECT_THROW(CantorPairingSystem({0}), PreconditionFailed);
}

TEST(Pairing, FiniteSystems) {
  EXPECT_FALSE(FinitePairingSystem(1, {{2, {FinFunction::identity(1), FinFunction::identity(1)}}}).violation());
  EXPECT_FALSE(FinitePairingSystem(3, {{1, {FinFunction({2, 0, 1}, 3)}}}).violation());
  EXPECT_TRUE(FinitePairingSystem(3, {{1, {FinFunction({0, 0, 1}, 3)}}}).violation());
  EXPECT_TRUE(FinitePairingSystem(2, {{2, {FinFunction::identity(2), FinFunction::identity(2)}}}).violation());
  EXPECT_THROW(FinitePairingSystem(2, {{2, {FinFunction::identity(2)}}}), DomainMismatch);
}

TEST(NatStructure, BundledRelationsEnumerateTheirMembers) {
  const auto s = nat_order_structure();
  for (const auto& r : s.relations) {
    const Nat count = r.count.value_or(500);
    for (Nat k = 0; k < count; ++k) {
      const auto t = r.at(k);
      ASSERT_EQ(t.size(), r.arity);
      EXPECT_TRUE(r.contains(t)) << r.name;
      EXPECT_EQ(r.index_of(t), k) << r.name;
    }
  }
  const auto lt = s.relations[*s.index_of("lt")];
  const std::vector<Nat> no{4, 4};
  EXPECT_FALSE(lt.contains(no));
  EXPECT_FALSE(lt.index_of(no));
  // Every pair x < y below 40 is enumerated.
  std::set<std::vector<Nat>> seen;
  for (Nat k = 0; k < 3000; ++k) seen.insert(lt.at(k));
  for (Nat x = 0; x < 40; ++x)
    for (Nat y = x + 1; y < 40; ++y) EXPECT_TRUE(seen.count({x, y}));
}

TEST(NatStructure, Augmentation) {
  const CantorPairingSystem ps({1, 2, 3});
  const auto aug = augment_with_pairing(nat_order_structure(), ps);
  EXPECT_EQ(aug.constants, (std::vector<Nat>{0, 1, 2}));
  const auto& t2 = aug.structure.relations[*aug.structure.index_of("T2")];
  EXPECT_TRUE(t2.contains(std::vector<Nat>{1}));
  EXPECT_FALSE(t2.contains(std::vector<Nat>{2}));
  const auto& s1 = aug.structure.relations[*aug.structure.index_of("S1")];
  EXPECT_TRUE(s1.contains(std::vector<Nat>{9, 0, 9}));
  EXPECT_FALSE(s1.contains(std::vector<Nat>{9, 0, 8}));
  const auto& s2 = aug.structure.relations[*aug.structure.index_of("S2")];
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Nat a = rng() % 100000, b = rng() % 100000;
    const Nat x = pair2(a, b);
    EXPECT_TRUE(s2.contains(std::vector<Nat>{x, 0, a}));
    EXPECT_TRUE(s2.contains(std::vector<Nat>{x, 1, b}));
    EXPECT_EQ(s2.index_of(std::vector<Nat>{x, 1, b}), x * 2 + 1);
    EXPECT_EQ(s2.at(x * 2 + 1), (std::vector<Nat>{x, 1, b}));
  }
  EXPECT_THROW(augment_with_pairing(nat_order_structure(), ps, {0, 0, 1}), PreconditionFailed);
  const auto custom = augment_with_pairing(nat_order_structure(), ps, {7, 3, 5});
  EXPECT_TRUE(custom.structure.relations[*custom.structure.index_of("T3")].contains(std::vector<Nat>{5}));
}

TEST(NatStructure, ProjectionCertificate) {
  const CantorPairingSystem ps({1, 2, 3});
  const auto aug = augment_with_pairing(nat_order_structure(), ps);
  std::mt19937_64 rng(6);

  const auto s3 = sample_tuples(rng, 200, 3, 1000);
  const auto second = projection_certificate([](std::span<const Nat> x) { return x[1]; }, aug, 3, s3);
  EXPECT_TRUE(second.consistent);
  EXPECT_EQ(second.index, 1u);
  EXPECT_EQ(second.samples_checked, 200u);

  const auto s2 = sample_tuples(rng, 200, 2, 1000);
  const auto constant = projection_certificate([](std::span<const Nat>) { return Nat{0}; }, aug, 2, s2);
  EXPECT_FALSE(constant.consistent);
  EXPECT_EQ(constant.reason, "diagonal law fails");

  const auto swapped = projection_certificate(
      [](std::span<const Nat> x) { return x[0] == x[1] ? x[0] : pair2(x[1], x[0]); }, aug, 2, s2);
  EXPECT_FALSE(swapped.consistent);
  EXPECT_EQ(swapped.reason, "S_n not preserved");
  EXPECT_TRUE(swapped.witness.contains("image"));

  const auto escape = projection_certificate([](std::span<const Nat> x) { return x[0] + 10; }, aug, 2, s2);
  EXPECT_FALSE(escape.consistent);
  EXPECT_NE(escape.reason.find("T_n"), std::string::npos);
}
