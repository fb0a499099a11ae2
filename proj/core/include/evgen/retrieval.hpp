#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evgen/corpus.hpp"
#include "evgen/error.hpp"
#include "evgen/kb.hpp"

namespace evgen {

class RetrievalError : public Error {
 public:
  enum class Kind {
    kDuplicateId,
    kEmptyIndex,
    kUnknownDocument,
    kInvalidArgument,
    kIo,
    kCorruptIndex,
  };

  RetrievalError(Kind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

struct IndexStats {
  std::size_t doc_count = 0;
  double avg_doc_length = 0.0;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  // Throws RetrievalError(kInvalidArgument) unless k1 >= 0 and b in [0, 1].
  void validate() const;
};

struct SearchHit {
  std::string doc_id;
  std::uint32_t doc = 0;  // ordinal in the index
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const SearchHit&) const = default;
};

// Immutable after build()/load(). Terms are kept in lexicographic order so
// the serialized form depends only on the corpus.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  static InvertedIndex build(std::span<const Document> docs);

  const IndexStats& stats() const { return stats_; }
  std::size_t doc_count() const { return doc_ids_.size(); }
  std::size_t term_count() const { return terms_.size(); }

  std::optional<std::uint32_t> term_id(std::string_view term) const;
  const std::string& term(std::uint32_t id) const { return terms_[id]; }
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t doc_frequency(std::string_view term) const;
  std::uint32_t term_frequency(std::uint32_t doc, std::string_view term) const;

  const std::string& doc_id(std::uint32_t doc) const;
  std::optional<std::uint32_t> find_doc(std::string_view doc_id) const;
  std::uint32_t doc_length(std::uint32_t doc) const;

  // Re-segments the stored title and abstract.
  Document document(std::uint32_t doc) const;

  // True when the phrase occurs as consecutive tokens inside one sentence.
  bool contains_phrase(std::uint32_t doc, const TokenSeq& phrase) const;
  // Ascending ordinals of every document containing the phrase.
  std::vector<std::uint32_t> docs_with_phrase(const TokenSeq& phrase) const;

  std::vector<std::uint8_t> serialize() const;
  static InvertedIndex deserialize(std::span<const std::uint8_t> bytes);

  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

 private:
  // Marks a sentence boundary in the forward token stream.
  static constexpr std::uint32_t kSentenceBreak = 0xFFFFFFFFu;

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::span<const std::uint32_t> forward(std::uint32_t doc) const;
  void finalize();

  std::vector<std::string> terms_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::string> doc_ids_;
  std::vector<std::string> titles_;
  std::vector<std::string> bodies_;
  std::vector<std::uint32_t> doc_lengths_;
  // Per-document term ids with kSentenceBreak between sentences.
  std::vector<std::uint32_t> forward_;
  std::vector<std::size_t> forward_offsets_{0};

  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>>
      term_lookup_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>>
      doc_lookup_;
  IndexStats stats_;
};

// ln((N - df + 0.5) / (df + 0.5) + 1). Throws kEmptyIndex when N == 0.
double idf(const InvertedIndex& index, std::string_view term);

// Distinct tokens of every surface form of every group, sorted.
std::vector<std::string> scoring_terms(const ExpandedQuery& query);

double bm25_score(const InvertedIndex& index, std::uint32_t doc,
                  const ExpandedQuery& query, const Bm25Params& params);

// Documents with at least one surface form of every group, by descending
// BM25 score then ascending doc id; at most k of them. An empty index
// yields no hits.
std::vector<SearchHit> search(const InvertedIndex& index,
                              const ExpandedQuery& query, std::size_t k,
                              const Bm25Params& params);

}  // namespace evgen
