#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run coend(const std::string& args) {
  const std::string cmd = std::string(COEND_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(COEND_DATA) + "/" + name; }

}  // namespace

TEST(Cli, VerifyAllIsDeterministic) {
  const auto a = coend("--seed 5 verify-all --samples 200 --no-timing");
  const auto b = coend("--seed 5 verify-all --samples 200 --no-timing");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["summary"]["fail"], 0);
  EXPECT_FALSE(j.contains("timing"));
}

TEST(Cli, TensorReportHasClassTableAndChecks) {
  const auto r = coend("tensor --carrier 2 --functor rep:2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "tensor");
  EXPECT_EQ(j["data"]["class_count"], 4);
  for (const auto& c : j["data"]["classes"]) {
    EXPECT_TRUE(c.contains("canonical"));
    EXPECT_TRUE(c.contains("length"));
    EXPECT_TRUE(c.contains("size"));
  }
  EXPECT_GT(j["results"].size(), 5u);
}

TEST(Cli, CarrierAboveCapIsSkippedWithReason) {
  const auto j = nlohmann::json::parse(coend("--cap 1 tensor --carrier 2 --functor pow").out);
  ASSERT_EQ(j["results"].size(), 1u);
  EXPECT_EQ(j["results"][0]["status"], "SKIPPED");
  EXPECT_NE(j["results"][0]["reason"].get<std::string>().find("--cap"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(coend("rigidity check --structure one-in-three").code, 0);
  EXPECT_EQ(coend("rigidity check --structure two-point").code, 1);
  EXPECT_EQ(coend("tensor").code, 2);
  EXPECT_EQ(coend("--report yaml pairing").code, 2);
  EXPECT_EQ(coend("encode analyze --n 1").code, 2);
  EXPECT_EQ(coend("functor check --functor rep:x").code, 2);
}

TEST(Cli, CorruptedFunctorFileReportsPosition) {
  const std::string path = ::testing::TempDir() + "/corrupt_functor.json";
  std::ofstream(path) << "{\"bound\": 2,\n \"values\": [[], [\"*\"]\n \"actions\": {}}";
  const auto r = coend("functor check --functor " + path);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 3, column"), std::string::npos) << r.out;
}

TEST(Cli, BundledDataFilesLoad) {
  EXPECT_EQ(coend("functor check --functor " + data("const2_functor.json")).code, 0);
  EXPECT_EQ(coend("rigidity check --structure " + data("one_in_three.json")).code, 0);
  EXPECT_EQ(coend("rigidity check --structure " + data("two_point.json")).code, 1);
  EXPECT_EQ(coend("encode check --samples 200 --structure " + data("nat_cycle.json")).code, 0);
  EXPECT_EQ(coend("encode check --n 2 --presheaf " + data("one_in_three_presheaf.json")).code, 0);
  EXPECT_EQ(coend("encode check --n 1 --functor rep:1 --presheaf two-point").code, 1);
}

TEST(Cli, AnalyzeSubprocess) {
  const std::string bb = COEND_BLACKBOX;
  auto r = coend("--seed 7 encode analyze --fn \"" + bb + " --tau 5\" --functor rep:2 --n 3 --samples 300");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["results"][0]["detail"]["verdict"], "NAIVE");
  r = coend("encode analyze --fn \"" + bb + " --tau 5 --shift\" --functor rep:2 --n 3 --samples 300");
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, PairingValues) {
  const auto j = nlohmann::json::parse(coend("pairing --n 2 --pair 3,4 --unpair 32 --samples 100").out);
  // Cantor: <3,4> = (3+4)(3+4+1)/2 + 4 = 32.
  EXPECT_EQ(j["data"]["pair"]["code"], 32);
  EXPECT_EQ(j["data"]["unpair"]["tuple"], nlohmann::json::array({3, 4}));
}
