#include <gtest/gtest.h>

#include <sstream>

#include "evgen/eval.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace evgen {
namespace {

const char* kReference =
    "metformin treatment prevent diabetes, but lifestyle intervention is more effective";

TEST(Rouge1Recall, Examples) {
  EXPECT_DOUBLE_EQ(rouge1_recall("a b c", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(rouge1_recall("x y", "a b c"), 0.0);
  EXPECT_DOUBLE_EQ(rouge1_recall("metformin reduced the incidence of diabetes", kReference),
                   0.2);
}

TEST(Rouge1Recall, MultisetCounts) {
  EXPECT_DOUBLE_EQ(rouge1_recall("a", "a a"), 0.5);
  EXPECT_DOUBLE_EQ(rouge1_recall("a a a", "a a"), 1.0);
  EXPECT_DOUBLE_EQ(rouge1_recall("", "a b"), 0.0);
  try {
    rouge1_recall("a", " ,.");
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind(), EvalError::Kind::kEmptyReference);
  }
}

TEST(Golden, ReadsEntriesAndReportsBadLines) {
  std::istringstream ok(
      "{\"query\":\"a, b\",\"relevant_doc_ids\":[\"x\"],\"skeleton_items\":[\"a\"],"
      "\"reference_summary\":\"a b\"}\n\n");
  auto entries = read_golden(ok);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].relevant_doc_ids, std::vector<std::string>{"x"});

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_golden(in);
    } catch (const EvalError& e) {
      EXPECT_EQ(e.kind(), EvalError::Kind::kGoldenFormat);
      return e.line();
    }
    return 0;
  };
  const std::string good =
      "{\"query\":\"a\",\"relevant_doc_ids\":[],\"skeleton_items\":[],"
      "\"reference_summary\":\"a\"}\n";
  EXPECT_EQ(line_of(good + "not json\n"), 2u);
  EXPECT_EQ(line_of(good + "{\"query\":\"a\"}\n"), 2u);
  EXPECT_EQ(line_of("{\"query\":\"a\",\"relevant_doc_ids\":[1],\"skeleton_items\":[],"
                    "\"reference_summary\":\"a\"}\n"),
            1u);
  EXPECT_EQ(line_of("{\"query\":\"\",\"relevant_doc_ids\":[],\"skeleton_items\":[],"
                    "\"reference_summary\":\"a\"}\n"),
            1u);
  EXPECT_EQ(line_of("{\"query\":\"a\",\"relevant_doc_ids\":[],\"skeleton_items\":[],"
                    "\"reference_summary\":\"...\"}\n"),
            1u);
}

EvidenceSet fake_output(const std::string& query, std::vector<std::string> doc_ids,
                        std::vector<std::string> spans, const std::string& text) {
  EvidenceSet set;
  set.raw_query = query;
  set.query = parse_query(query);
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    EvidenceEntry e;
    e.hit.doc_id = doc_ids[i];
    e.hit.rank = i + 1;
    if (i == 0) {
      e.span_texts = spans;
      Evidence ev;
      ev.doc_id = doc_ids[i];
      ev.sentences.push_back({0, text});
      e.evidence = ev;
    } else {
      e.evidence = NoEvidence{};
    }
    set.results.push_back(std::move(e));
  }
  return set;
}

TEST(Evaluate, PerfectPredictionsScoreOne) {
  std::vector<GoldenEntry> golden{{"a, b", {"d1"}, {"Alpha", "beta gamma"}, "alpha beta gamma"},
                                  {"c", {"d2"}, {"c"}, "c c"},
                                  {"e", {"d3"}, {"e"}, "e"}};
  std::vector<EvidenceSet> outputs{
      fake_output("c", {"d2"}, {"c"}, "c and c"),
      fake_output("a,b", {"d1"}, {"alpha", "beta gamma"}, "Alpha beta gamma."),
      fake_output("e", {"d3"}, {"e"}, "e")};
  auto report = evaluate(outputs, golden);
  ASSERT_EQ(report.queries.size(), 3u);
  for (const auto& q : report.queries) {
    EXPECT_DOUBLE_EQ(q.precision_at_k, 1.0);
    EXPECT_DOUBLE_EQ(q.skeleton_f1, 1.0);
    EXPECT_DOUBLE_EQ(q.rouge1_recall, 1.0);
  }
  EXPECT_DOUBLE_EQ(report.macro.precision_at_k, 1.0);
  EXPECT_DOUBLE_EQ(report.macro.skeleton_f1, 1.0);
  EXPECT_DOUBLE_EQ(report.macro.rouge1_recall, 1.0);
}

TEST(Evaluate, EmptyOutputsScoreZero) {
  std::vector<GoldenEntry> golden{{"a", {"d1"}, {"a"}, "a b"}};
  std::vector<EvidenceSet> outputs{fake_output("a", {}, {}, "")};
  auto report = evaluate(outputs, golden);
  EXPECT_DOUBLE_EQ(report.queries[0].precision_at_k, 0.0);
  EXPECT_DOUBLE_EQ(report.queries[0].skeleton_f1, 0.0);
  EXPECT_DOUBLE_EQ(report.queries[0].rouge1_recall, 0.0);
  // No output at all for the query.
  auto missing = evaluate({}, golden);
  EXPECT_DOUBLE_EQ(missing.macro.precision_at_k, 0.0);
}

TEST(Evaluate, PartialScoresStayInRange) {
  std::vector<GoldenEntry> golden{{"a", {"d1", "d9"}, {"a", "b"}, "a b c d"}};
  std::vector<EvidenceSet> outputs{
      fake_output("a", {"d1", "d2", "d3", "d4"}, {"a", "z"}, "a c")};
  auto report = evaluate(outputs, golden);
  EXPECT_DOUBLE_EQ(report.queries[0].precision_at_k, 0.25);
  EXPECT_DOUBLE_EQ(report.queries[0].skeleton_f1, 0.5);
  EXPECT_DOUBLE_EQ(report.queries[0].rouge1_recall, 0.5);
  auto j = nlohmann::json::parse(to_json(report));
  EXPECT_DOUBLE_EQ(j["macro"]["skeleton_f1"].get<double>(), 0.5);
  EXPECT_EQ(j["queries"][0]["query"], "a");
}

TEST(Evaluate, ShippedGoldenAgainstPipeline) {
  testing::TempDir dir;
  auto engine = Engine::open(testing::mini_config(dir));
  auto golden = load_golden(testing::data_path("golden.jsonl"));
  ASSERT_EQ(golden.size(), 1u);
  std::vector<EvidenceSet> outputs{engine.run(golden[0].query)};
  auto report = evaluate(outputs, golden);
  EXPECT_DOUBLE_EQ(report.queries[0].precision_at_k, 1.0);
  EXPECT_DOUBLE_EQ(report.queries[0].skeleton_f1, 1.0);
  EXPECT_GE(report.queries[0].rouge1_recall, 0.2);
}

}  // namespace
}  // namespace evgen
