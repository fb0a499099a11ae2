#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "fixtures.hpp"
#include "json.hpp"

#ifdef EVGEN_CLI_PATH

namespace evgen {
namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(EVGEN_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    auto r = run("index --corpus " + quoted(testing::data_path("corpus.jsonl")) + " --out " +
                 quoted(index));
    ASSERT_EQ(r.code, 0);
  }
  std::string engine_flags() const {
    return "--config " + quoted(testing::data_path("engine.cfg")) + " --index " + quoted(index);
  }

  testing::TempDir dir;
  std::filesystem::path index = dir / "mini.idx";
};

TEST_F(Cli, IndexIsByteIdenticalAcrossRuns) {
  ASSERT_EQ(run("index --corpus " + quoted(testing::data_path("corpus.jsonl")) + " --out " +
                quoted(dir / "again.idx"))
                .code,
            0);
  EXPECT_EQ(testing::read_file(index), testing::read_file(dir / "again.idx"));
}

TEST_F(Cli, QueryTextAndJson) {
  auto text = run("query " + engine_flags() + " 'diabetes, metformin'");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("dpp1"), std::string::npos);
  EXPECT_NE(text.out.find("reduced the incidence of"), std::string::npos);

  auto json = run("query " + engine_flags() + " --json 'diabetes, metformin'");
  EXPECT_EQ(json.code, 0);
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["results"][0]["doc_id"], "dpp1");

  auto evidence = run("evidence " + engine_flags() + " 'diabetes, metformin'");
  EXPECT_EQ(evidence.code, 0);
  EXPECT_EQ(evidence.out, json.out);
}

TEST_F(Cli, FlagsOverrideConfig) {
  auto j = nlohmann::json::parse(run("evidence " + engine_flags() + " --k 1 metformin").out);
  EXPECT_EQ(j["results"].size(), 1u);
}

TEST_F(Cli, Eval) {
  auto r = run("eval " + engine_flags() + " --golden " +
               quoted(testing::data_path("golden.jsonl")));
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["macro"]["skeleton_f1"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["macro"]["precision_at_k"].get<double>(), 1.0);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("query " + engine_flags()).code, 1);
  EXPECT_EQ(run("query " + engine_flags() + " ' , '").code, 1);
  EXPECT_EQ(run("query " + engine_flags() + " --k 0 metformin").code, 1);
  EXPECT_EQ(run("serve " + engine_flags() + " --addr nonsense").code, 1);
  EXPECT_EQ(run("--help").code, 0);

  EXPECT_EQ(run("query --index /nonexistent.idx metformin").code, 2);
  EXPECT_EQ(run("index --corpus /nonexistent.jsonl --out " + quoted(dir / "x.idx")).code, 2);
  testing::write_file(dir / "bad.jsonl", "{\"id\":\"a\"}\n");
  EXPECT_EQ(run("index --corpus " + quoted(dir / "bad.jsonl") + " --out " +
                quoted(dir / "x.idx"))
                .code,
            2);
  EXPECT_EQ(run("index --lenient --corpus " + quoted(dir / "bad.jsonl") + " --out " +
                quoted(dir / "x.idx"))
                .code,
            0);
  testing::write_file(dir / "corrupt.idx", "BEGEIDX1 garbage");
  EXPECT_EQ(run("query --index " + quoted(dir / "corrupt.idx") + " metformin").code, 2);
  // A lenient index of nothing is empty; querying it is a data error.
  EXPECT_EQ(run("query --index " + quoted(dir / "x.idx") + " metformin").code, 2);
}

}  // namespace
}  // namespace evgen

#endif  // EVGEN_CLI_PATH
