#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coend/encoding.hpp"
#include "coend/errors.hpp"

using namespace coend;

namespace {

std::size_t count_status(const std::vector<CheckResult>& rs, Status s) {
  std::size_t k = 0;
  for (const auto& r : rs) k += r.status == s;
  return k;
}

const CheckResult& find(const std::vector<CheckResult>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("no check named " + name);
}

}  // namespace

TEST(EncodingGraph, EmptyLanguageHasOnlyPairingEdges) {
  const auto g = build_encoding_graph(RelLanguage(), 2);
  EXPECT_EQ(g.vertices, std::vector<std::string>{"v"});
  std::vector<std::string> names;
  for (const auto& e : g.edges) names.push_back(e.name);
  EXPECT_EQ(names, (std::vector<std::string>{"p^1_0", "p^2_0", "p^2_1", "p'^1_0", "p'^2_0", "p'^2_1"}));
}

TEST(EncodingGraph, EdgeCountAndEndpoints) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const RelLanguage l({{"E", 2}, {"U", 1}, {"R", 3}});
    const auto g = build_encoding_graph(l, n);
    EXPECT_EQ(g.edges.size(), n * (n + 1) + 2 * 3);
    EXPECT_EQ(g.vertices.size(), 4u);
    for (const auto& e : g.edges) {
      if (e.kind == EdgeKind::Section) {
        EXPECT_EQ(g.vertices[e.source], "v_" + l[e.symbol].name);
        EXPECT_EQ(e.target, 0u);
      } else if (e.kind == EdgeKind::Retraction) {
        EXPECT_EQ(e.source, 0u);
        EXPECT_EQ(g.vertices[e.target], "v_" + l[e.symbol].name);
      } else {
        EXPECT_EQ(e.source, 0u);
        EXPECT_EQ(e.target, 0u);
      }
    }
  }
  const auto g3 = build_encoding_graph(RelLanguage({{"E", 2}}), 3);
  std::size_t p_type = 0;
  for (const auto& e : g3.edges) p_type += e.kind == EdgeKind::Pairing || e.kind == EdgeKind::PrimedPairing;
  EXPECT_EQ(p_type, 12u);
}

TEST(EncodingGraph, Preconditions) {
  EXPECT_THROW(build_encoding_graph(RelLanguage({{"c", 0}}), 2), PreconditionFailed);
  EXPECT_THROW(build_encoding_graph(RelLanguage(), 1), PreconditionFailed);
}

TEST(PresheafEncoding, BundledStructurePassesAllLaws) {
  const auto e = build_presheaf_encoding(nat_order_structure(), 4);
  const auto rs = check_encoding(e, 1000, 7);
  EXPECT_EQ(count_status(rs, Status::Fail), 0u);
  for (const auto& name : {"retraction_law/lt", "retraction_law/even", "retraction_law/one_in_three",
                           "p_prime_law/2", "s_prime_law/lt", "section_injective/one_in_three"})
    EXPECT_EQ(find(rs, name).status, Status::Pass) << name;
  EXPECT_EQ(find(rs, "retraction_law/lt").detail["checked"], 1000);
}

TEST(PresheafEncoding, DisplayedPrimeLawDirectly) {
  // Independent of the edge table: p'^2_1 <x, <a, b>> = <x, b> through the Cantor walk formula.
  const auto e = build_presheaf_encoding(nat_order_structure(), 2);
  const auto idx = *e.presheaf.graph.edge_index("p'^2_1");
  std::mt19937_64 rng(3);
  auto cantor = [](Nat a, Nat b) { return (a + b) * (a + b + 1) / 2 + b; };
  for (int k = 0; k < 1000; ++k) {
    const Nat x = rng() % 1000, a = rng() % 1000, b = rng() % 1000;
    EXPECT_EQ(e.presheaf.actions[idx](cantor(x, cantor(a, b))), cantor(x, b));
  }
}

TEST(PresheafEncoding, RetractionSendsStrayElementsToDefault) {
  const auto e = build_presheaf_encoding(nat_order_structure(), 2);
  const auto r = *e.presheaf.graph.edge_index("r_lt");
  // (5, 3) is not in lt.
  EXPECT_EQ(e.presheaf.actions[r](pair2(9, pair2(5, 3))), PresheafEncoding::default_fiber_element);
  // (3, 5) is member <3, 1> of lt.
  EXPECT_EQ(e.presheaf.actions[r](pair2(9, pair2(3, 5))), pair2(9, pair2(3, 1)));
  const auto r3 = *e.presheaf.graph.edge_index("r_one_in_three");
  EXPECT_EQ(e.presheaf.actions[r3](pair2(4, pair_n(std::vector<Nat>{1, 1, 0}))), 0u);
}

TEST(PresheafEncoding, SectionIsInjectiveOnMembers) {
  const auto s = nat_order_structure();
  const auto e = build_presheaf_encoding(s, 2);
  std::set<Nat> images;
  for (Nat k = 0; k < 5000; ++k) images.insert(e.section(0, s.relations[0].at(k)));
  EXPECT_EQ(images.size(), 5000u);
}

TEST(PresheafEncoding, EmptyOrNullaryRelationRejected) {
  NatStructure s;
  s.relations.push_back(finite_nat_relation("R", 2, {}));
  EXPECT_THROW(build_presheaf_encoding(s, 2), PreconditionFailed);
  NatStructure t;
  t.relations.push_back(finite_nat_relation("c", 0, {{}}));
  EXPECT_THROW(build_presheaf_encoding(t, 2), PreconditionFailed);
}

TEST(CheckPresheaf, BrokenRetractionIsReported) {
  auto e = build_presheaf_encoding(nat_order_structure(), 2);
  auto& p = e.presheaf;
  const auto r = *p.graph.edge_index("r_even");
  const auto good = p.actions[r];
  const Nat bad = pair2(0, 0);
  // Break the law on the single element <0, 0> of v_even.
  p.actions[r] = [good, bad](Nat z) { return good(z) == bad ? Nat{1} : good(z); };
  p.carriers[2].size = 4;  // finite carrier [4] so the broken element is visited
  const auto rs = check_presheaf(p, 100, 1);
  const auto& res = find(rs, "retraction_law/even");
  EXPECT_EQ(res.status, Status::Fail);
  EXPECT_EQ(res.detail["witness"]["element"], 0);
  EXPECT_TRUE(res.detail["exhaustive"].get<bool>());
}

TEST(CheckPresheaf, SingletonCarriersPass) {
  EncodingPresheaf p;
  p.graph = build_encoding_graph(RelLanguage({{"E", 2}, {"U", 1}}), 2);
  for (std::size_t v = 0; v < p.graph.vertices.size(); ++v) p.carriers.push_back({Nat{1}, nullptr});
  for (std::size_t k = 0; k < p.graph.edges.size(); ++k) p.actions.push_back([](Nat) { return Nat{0}; });
  const auto rs = check_presheaf(p, 10, 0);
  EXPECT_EQ(rs.size(), 2u);
  EXPECT_EQ(count_status(rs, Status::Fail), 0u);
}

TEST(PresheafEncoding, FiniteStructureSamplesStayInsideQ) {
  NatStructure s;
  s.relations.push_back(finite_nat_relation("E", 2, {{0, 1}, {1, 2}, {2, 0}}));
  const auto e = build_presheaf_encoding(s, 3);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const Nat y = e.presheaf.carriers[1].sample(rng);
    EXPECT_LT(unpair2(y).second, 3u);
  }
  EXPECT_EQ(count_status(check_encoding(e, 500, 5), Status::Fail), 0u);
}
