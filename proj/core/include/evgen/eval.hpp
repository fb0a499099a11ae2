#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/engine.hpp"
#include "evgen/error.hpp"

namespace evgen {

class EvalError : public LineError {
 public:
  enum class Kind { kGoldenFormat, kEmptyReference };

  EvalError(Kind kind, std::size_t line, const std::string& what)
      : LineError(what, line), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct GoldenEntry {
  std::string query;
  std::vector<std::string> relevant_doc_ids;
  std::vector<std::string> skeleton_items;
  std::string reference_summary;
};

// JSONL of {query, relevant_doc_ids, skeleton_items, reference_summary}.
std::vector<GoldenEntry> read_golden(std::istream& in);
std::vector<GoldenEntry> load_golden(const std::filesystem::path& path);

// |multiset intersection of token norms| / |reference tokens|.
double rouge1_recall(std::string_view candidate, std::string_view reference);

struct QueryScores {
  std::string query;
  double precision_at_k = 0.0;
  double skeleton_f1 = 0.0;
  double rouge1_recall = 0.0;
};

struct EvalReport {
  std::vector<QueryScores> queries;
  QueryScores macro;  // query field unused
};

// Outputs are matched to golden entries by parsed query. Precision is over
// the returned hits, skeleton F1 compares the normalized span texts of all
// hits to the golden items, and ROUGE-1 recall scores the evidence text of
// all hits in rank order. A golden entry without a matching output scores 0.
EvalReport evaluate(std::span<const EvidenceSet> outputs,
                    std::span<const GoldenEntry> golden);

std::string to_json(const EvalReport& report, int indent = -1);

}  // namespace evgen
