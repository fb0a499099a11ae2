#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/corpus.hpp"
#include "evgen/kb.hpp"

namespace evgen {

// Declaration order is overlap-resolution priority, strongest first.
enum class SpanLabel { kExactMatch, kTrigger, kSimilar };

std::string_view to_string(SpanLabel label);

struct SkeletonSpan {
  std::size_t sentence = 0;
  // Half-open range into Document::tokens().
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  SpanLabel label = SpanLabel::kExactMatch;
  double score = 1.0;
  // Entity group answered; empty for triggers.
  std::optional<std::size_t> group;

  std::size_t length() const { return token_end - token_begin; }
  bool operator==(const SkeletonSpan&) const = default;
};

struct SkeletonConfig {
  double tau = 0.6;
  std::size_t max_similar_per_sentence = 3;

  // Throws std::invalid_argument unless tau lies in (0, 1].
  void validate() const;
};

struct SkeletonAnnotation {
  std::string doc_id;
  // Sorted by (sentence, token_begin); disjoint.
  std::vector<SkeletonSpan> spans;
  double tau = 0.0;

  bool operator==(const SkeletonAnnotation&) const = default;
};

// Space-joined token norms covered by the span.
std::string span_text(const Document& doc, const SkeletonSpan& span);

std::vector<SkeletonSpan> match_exact(const Document& doc,
                                      const ExpandedQuery& query);

std::vector<SkeletonSpan> match_triggers(const Document& doc,
                                         const TriggerLexicon& lexicon);

// Single tokens outside exact matches whose embedding reaches cosine >= tau
// against the mean vector of some surface form of some group. Stopwords
// never match.
std::vector<SkeletonSpan> match_similar(const Document& doc,
                                        const ExpandedQuery& query,
                                        const EmbeddingTable& embeddings,
                                        const WordSet& stopwords,
                                        const SkeletonConfig& config);

// Union of the three matchers; overlaps keep the stronger label, then the
// longer span, then the earlier start.
SkeletonAnnotation extract_skeleton(const Document& doc,
                                    const ExpandedQuery& query,
                                    const TriggerLexicon& lexicon,
                                    const EmbeddingTable& embeddings,
                                    const WordSet& stopwords,
                                    const SkeletonConfig& config);

std::vector<SkeletonSpan> resolve_overlaps(std::vector<SkeletonSpan> spans);

}  // namespace evgen
