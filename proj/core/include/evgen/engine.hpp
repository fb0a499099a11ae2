#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/corpus.hpp"
#include "evgen/kb.hpp"
#include "evgen/retrieval.hpp"
#include "evgen/skeleton.hpp"
#include "evgen/summarize.hpp"

namespace evgen {

// Raised for malformed user queries; the CLI treats these as usage errors.
class QueryError : public Error {
 public:
  enum class Kind { kEmptyQuery, kBadEntity };

  QueryError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// "disease:diabetes, drug:metformin". Entities are comma-separated; a
// leading `disease:`, `gene:`, `drug:` or `other:` sets the type, otherwise
// the type is `other`. Empty entries are ignored.
Query parse_query(std::string_view raw);

struct EvidenceEntry {
  SearchHit hit;
  SkeletonAnnotation skeleton;
  // span_text() of each skeleton span, parallel to skeleton.spans.
  std::vector<std::string> span_texts;
  EvidenceOutcome evidence;
};

struct EvidenceSet {
  std::string raw_query;
  Query query;
  ExpandedQuery expanded;
  // One entry per search hit, in rank order.
  std::vector<EvidenceEntry> results;
};

struct EngineResources {
  InvertedIndex index;
  SynonymKB synonyms;
  TriggerLexicon triggers;
  EmbeddingTable embeddings;
  WordSet stopwords;
};

// Holds an immutable index and resources; run() is safe to call from
// several threads at once.
class Engine {
 public:
  Engine(EngineResources resources, EngineConfig config);

  // Loads every resource named in the config. Resource paths left empty
  // load as empty resources; the index path is required.
  static Engine open(const EngineConfig& config);

  // Throws QueryError for an unusable query and RetrievalError(kEmptyIndex)
  // when the index holds no documents.
  EvidenceSet run(std::string_view raw_query,
                  std::optional<std::size_t> k = std::nullopt) const;

  const EngineConfig& config() const { return config_; }
  const EngineResources& resources() const { return resources_; }

 private:
  EngineResources resources_;
  EngineConfig config_;
};

EvidenceSet run_pipeline(std::string_view raw_query, const EngineConfig& config);

// Fixed key order; byte-identical for identical inputs. indent < 0 gives
// compact output.
std::string to_json(const EvidenceSet& set, int indent = -1);

}  // namespace evgen
