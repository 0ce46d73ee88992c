#include <gtest/gtest.h>

#include <set>

#include "coend/errors.hpp"
#include "coend/finset.hpp"

using namespace coend;

namespace {

std::vector<FinFunction> all_functions_up_to(std::size_t max_size) {
  std::vector<FinFunction> out;
  for (std::size_t m = 0; m <= max_size; ++m)
    for (std::size_t n = 0; n <= max_size; ++n)
      for (auto& f : enumerate_functions(m, n)) out.push_back(std::move(f));
  return out;
}

}  // namespace

TEST(FinFunction, RejectsOutOfRangeValues) {
  EXPECT_THROW(FinFunction({0, 3}, 3), DomainMismatch);
  EXPECT_THROW(FinFunction({0}, 0), DomainMismatch);
  EXPECT_NO_THROW(FinFunction::empty(0));
}

TEST(FinFunction, ComposeExamples) {
  const auto id3 = FinFunction::identity(3);
  EXPECT_EQ(compose(id3, id3), id3);
  EXPECT_EQ(compose(FinFunction({0, 0}, 1), FinFunction({1, 1, 0}, 2)), FinFunction({0, 0, 0}, 1));
  EXPECT_EQ(compose(FinFunction({2, 0}, 3), FinFunction({1, 0}, 2)), FinFunction({0, 2}, 3));
  EXPECT_THROW(compose(id3, FinFunction::identity(2)), DomainMismatch);
}

TEST(FinFunction, ImageExamples) {
  EXPECT_TRUE(image(FinFunction::empty(2)).empty());
  EXPECT_EQ(image(FinFunction({1, 1, 1}, 2)), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(image(FinFunction({2, 0, 2}, 3)), (std::vector<std::uint32_t>{0, 2}));
}

TEST(FinFunction, InjectiveSurjective) {
  const auto id4 = FinFunction::identity(4);
  EXPECT_TRUE(is_injective(id4) && is_surjective(id4));
  EXPECT_FALSE(is_injective(FinFunction({0, 0}, 1)));
  EXPECT_TRUE(is_surjective(FinFunction({0, 0}, 1)));
  EXPECT_TRUE(is_injective(FinFunction::empty(0)) && is_surjective(FinFunction::empty(0)));
}

TEST(FinFunction, EnumerationCountsAndOrder) {
  EXPECT_EQ(enumerate_functions(0, 5).size(), 1u);
  EXPECT_EQ(enumerate_functions(0, 0).size(), 1u);
  EXPECT_TRUE(enumerate_functions(2, 0).empty());
  const auto two = enumerate_functions(2, 2);
  ASSERT_EQ(two.size(), 4u);
  EXPECT_EQ(two[0], FinFunction({0, 0}, 2));
  EXPECT_EQ(two[1], FinFunction({0, 1}, 2));
  EXPECT_EQ(two[2], FinFunction({1, 0}, 2));
  EXPECT_EQ(two[3], FinFunction({1, 1}, 2));
  EXPECT_EQ(enumerate_functions(3, 2).size(), 8u);
}

TEST(FinFunction, EnumerationHasNoDuplicatesAndMatchesRank) {
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 0; n <= 3; ++n) {
      const auto fs = enumerate_functions(m, n);
      std::uint64_t expected = 1;
      for (std::size_t i = 0; i < m; ++i) expected *= n;
      EXPECT_EQ(fs.size(), expected);
      std::set<FinFunction> unique(fs.begin(), fs.end());
      EXPECT_EQ(unique.size(), fs.size());
      for (std::size_t r = 0; r < fs.size(); ++r) {
        EXPECT_EQ(fs[r].rank(), r);
        EXPECT_EQ(FinFunction::from_rank(r, m, n), fs[r]);
        EXPECT_TRUE(std::is_sorted(fs.begin(), fs.end()));
      }
    }
  }
}

TEST(FinFunction, CompositionIsAssociativeWithUnits) {
  const auto all = all_functions_up_to(3);
  for (const auto& f : all) {
    EXPECT_EQ(compose(f, FinFunction::identity(f.dom_size())), f);
    EXPECT_EQ(compose(FinFunction::identity(f.cod_size()), f), f);
    for (const auto& g : all) {
      if (g.dom_size() != f.cod_size()) continue;
      const auto gf = compose(g, f);
      for (std::size_t i = 0; i < f.dom_size(); ++i) EXPECT_EQ(gf(i), g(f(i)));
      const auto img_gf = image(gf);
      const auto img_g = image(g);
      EXPECT_TRUE(std::includes(img_g.begin(), img_g.end(), img_gf.begin(), img_gf.end()));
      for (const auto& h : all) {
        if (h.dom_size() != g.cod_size()) continue;
        EXPECT_EQ(compose(h, gf), compose(compose(h, g), f));
      }
    }
  }
}

TEST(FinFunction, TupleRankRoundTrip) {
  for (std::size_t base = 1; base <= 4; ++base)
    for (std::size_t len = 0; len <= 4; ++len) {
      const auto count = checked_power(base, len);
      for (std::uint64_t r = 0; r < count; ++r) EXPECT_EQ(tuple_rank(tuple_unrank(r, len, base), base), r);
    }
  EXPECT_THROW(checked_power(10, 10, 1000), SearchTooLarge);
  EXPECT_THROW(tuple_unrank(0, 1, 0), DomainMismatch);
}
