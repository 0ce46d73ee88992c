#include <gtest/gtest.h>

#include "coend/verify.hpp"

using namespace coend;

namespace {

const Report& default_report() {
  static const Report r = verify_all({});
  return r;
}

}  // namespace

TEST(VerifyAll, DefaultConfigHasNoFailures) {
  const auto& r = default_report();
  for (const auto& c : r.results) EXPECT_NE(c.status, Status::Fail) << c.name << " " << to_json(c).dump();
  EXPECT_GT(r.count(Status::Pass), 100u);
}

TEST(VerifyAll, ExpectedEntriesComeFromTheExceptionalFunctors) {
  std::size_t expected = 0;
  for (const auto& c : default_report().results) {
    if (c.status != Status::Expected) continue;
    ++expected;
    EXPECT_TRUE(c.name.rfind("tensor_lemmas/ine/", 0) == 0 || c.name.rfind("tensor_lemmas/ine2/", 0) == 0) << c.name;
  }
  EXPECT_GE(expected, 2u);
}

TEST(VerifyAll, SkipsNameTheirReason) {
  for (const auto& c : default_report().results)
    if (c.status == Status::Skipped) EXPECT_FALSE(c.reason.empty()) << c.name;
}

TEST(VerifyAll, EveryTimedSectionIsPresent) {
  const auto j = default_report().to_json(true);
  for (const char* s : {"functors", "tensor_lemmas", "rigidity", "pairing", "encoding", "analyzer", "unique_tau"})
    EXPECT_TRUE(j["timing"].contains(s)) << s;
  EXPECT_FALSE(default_report().to_json(false).contains("timing"));
}

TEST(VerifyAll, ByteIdenticalWithoutTiming) {
  VerifyConfig c;
  c.seed = 99;
  c.samples = 200;
  const auto a = verify_all(c).to_json(false).dump();
  const auto b = verify_all(c).to_json(false).dump();
  EXPECT_EQ(a, b);
  c.execution = Execution::Serial;
  // The config records the execution mode; everything else must agree.
  auto serial = verify_all(c).to_json(false);
  auto parallel = nlohmann::json::parse(a);
  serial["config"].erase("execution");
  parallel["config"].erase("execution");
  EXPECT_EQ(serial, parallel);
}

TEST(VerifyAll, SeedChangesSampledDetailOnly) {
  VerifyConfig c;
  c.samples = 100;
  c.cap = 1;
  c.seed = 1;
  const auto a = verify_all(c);
  c.seed = 2;
  const auto b = verify_all(c);
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].name, b.results[i].name);
    EXPECT_EQ(a.results[i].status, b.results[i].status) << a.results[i].name;
  }
}

TEST(VerifyAll, CapZeroIsVacuous) {
  VerifyConfig c;
  c.cap = 0;
  c.samples = 100;
  c.n_max = 1;
  const auto r = verify_all(c);
  bool scope = false;
  for (const auto& x : r.results) {
    if (x.name == "tensor_lemmas/scope") {
      scope = true;
      EXPECT_NE(x.reason.find("vacuous"), std::string::npos);
      EXPECT_EQ(x.detail["carrier_sizes"], nlohmann::json::array({0}));
    }
    if (x.name.rfind("tensor_lemmas/", 0) == 0) {
      EXPECT_EQ(x.name.find("/X=1/"), std::string::npos);
      EXPECT_NE(x.status, Status::Fail) << x.name;
    }
  }
  EXPECT_TRUE(scope);
  EXPECT_FALSE(r.any_failure());
}
