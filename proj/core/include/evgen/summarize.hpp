#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "evgen/corpus.hpp"
#include "evgen/kb.hpp"
#include "evgen/skeleton.hpp"

namespace evgen {

struct SummaryConfig {
  std::size_t budget = 60;  // tokens
  bool compression = true;

  // Throws std::invalid_argument when budget is 0.
  void validate() const;
};

// Repeated mentions of the same concept share one identity.
struct ItemId {
  SpanLabel label = SpanLabel::kExactMatch;
  std::string text;
  std::optional<std::size_t> group;

  auto operator<=>(const ItemId&) const = default;
  bool operator==(const ItemId&) const = default;
};

using ItemSet = std::set<ItemId>;

struct EvidenceSentence {
  std::size_t index = 0;
  std::string text;

  bool operator==(const EvidenceSentence&) const = default;
};

struct Evidence {
  std::string doc_id;
  // In document order.
  std::vector<EvidenceSentence> sentences;
  ItemSet covered_items;
  Query query;
  SkeletonAnnotation skeleton;

  // Emitted sentences joined by single spaces.
  std::string text() const;
  bool operator==(const Evidence&) const = default;
};

struct NoEvidence {
  enum class Reason { kEmptySelection, kUnresponsive };
  Reason reason = Reason::kEmptySelection;

  bool operator==(const NoEvidence&) const = default;
};

using EvidenceOutcome = std::variant<Evidence, NoEvidence>;

ItemSet sentence_coverage(const Document& doc, std::size_t sentence,
                          const SkeletonAnnotation& annotation);

// Budgeted maximum coverage over per-sentence item sets: every feasible set
// of at most two sentences, plus every feasible triple extended greedily by
// new-items-per-token. Returns the best by coverage, then fewest tokens,
// then smallest index list. Indices come back ascending.
std::vector<std::size_t> select_budgeted(std::span<const ItemSet> coverage,
                                         std::span<const std::size_t> costs,
                                         std::size_t budget);

std::vector<std::size_t> select_sentences(const Document& doc,
                                          const SkeletonAnnotation& annotation,
                                          const SummaryConfig& config);

// Deletion-only rewrite: drops a leading discourse marker, then any
// parenthesized segment holding no skeleton token, then collapses
// whitespace. Tokens inside skeleton spans are never removed.
std::string compress_sentence(const Document& doc, std::size_t sentence,
                              const SkeletonAnnotation& annotation);

// True when every group has a surface form occurring as consecutive tokens
// in at least one of the texts.
bool responsive(std::span<const std::string> texts, const ExpandedQuery& query);

EvidenceOutcome generate_evidence(const Document& doc,
                                  const SkeletonAnnotation& annotation,
                                  const ExpandedQuery& query,
                                  const SummaryConfig& config);

}  // namespace evgen
