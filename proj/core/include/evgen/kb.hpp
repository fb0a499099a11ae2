#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "evgen/error.hpp"

namespace evgen {

// A lowercase-tokenized surface form, e.g. {"diabetes", "mellitus"}.
using TokenSeq = std::vector<std::string>;

TokenSeq to_token_seq(std::string_view surface);
std::string join(const TokenSeq& seq);

enum class EntityType { kDisease, kGene, kDrug, kOther };

std::optional<EntityType> parse_entity_type(std::string_view name);
std::string_view to_string(EntityType type);

struct Entity {
  std::string surface;
  EntityType type = EntityType::kOther;

  bool operator==(const Entity&) const = default;
};

struct Query {
  std::vector<Entity> entities;

  bool operator==(const Query&) const = default;
};

class KbError : public LineError {
 public:
  enum class Kind {
    kIo,
    kBadRow,
    kUnknownEntityType,
    kDimensionMismatch,
    kNonNumeric,
  };

  KbError(Kind kind, std::size_t line, const std::string& what)
      : LineError(what, line), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Maps (entity type, canonical form) to every surface form of the entity,
// the canonical form included.
class SynonymKB {
 public:
  using Key = std::pair<EntityType, TokenSeq>;

  // Throws std::invalid_argument if either side has no tokens.
  void add(EntityType type, std::string_view canonical, std::string_view alias);

  const std::set<TokenSeq>* find(EntityType type, const TokenSeq& canonical) const;
  // Union over every entity type; empty when the canonical is unknown.
  std::set<TokenSeq> find_any(const TokenSeq& canonical) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<Key, std::set<TokenSeq>>& entries() const { return entries_; }

  // Emits the TSV form read by read_synonym_kb.
  void write_tsv(std::ostream& out) const;

  bool operator==(const SynonymKB&) const = default;

 private:
  std::map<Key, std::set<TokenSeq>> entries_;
};

// TSV rows: etype <TAB> canonical <TAB> alias. Blank lines are skipped.
SynonymKB read_synonym_kb(std::istream& in);
SynonymKB load_synonym_kb(const std::filesystem::path& path);

struct EntityGroup {
  Entity source;
  TokenSeq source_form;
  std::set<TokenSeq> forms;

  bool operator==(const EntityGroup&) const = default;
};

struct ExpandedQuery {
  std::vector<EntityGroup> groups;

  bool operator==(const ExpandedQuery&) const = default;
};

// One group per entity, in query order. Entities typed `other` are looked
// up across every KB type. Entities whose surface has no tokens are
// rejected with std::invalid_argument.
ExpandedQuery expand_query(const Query& query, const SynonymKB& kb);

class TriggerLexicon {
 public:
  TriggerLexicon() = default;
  explicit TriggerLexicon(std::set<TokenSeq> phrases)
      : phrases_(std::move(phrases)) {}

  const std::set<TokenSeq>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }

 private:
  std::set<TokenSeq> phrases_;
};

// One phrase per line; lines starting with '#' are comments.
TriggerLexicon read_trigger_lexicon(std::istream& in);
TriggerLexicon load_trigger_lexicon(const std::filesystem::path& path);

using WordSet = std::unordered_set<std::string>;

// Same line syntax as the trigger lexicon; each line is one lowercase word.
WordSet read_word_list(std::istream& in);
WordSet load_word_list(const std::filesystem::path& path);

class EmbeddingTable {
 public:
  // 0 until the first vector is inserted.
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  // The first vector for a word wins. Throws std::invalid_argument on a
  // dimension mismatch or a non-finite component.
  void insert(std::string word, std::vector<double> vector);

  const std::vector<double>* find(std::string_view word) const;

  // Mean of the vectors of the phrase's tokens that have one; nullopt when
  // none do.
  std::optional<std::vector<double>> phrase_vector(const TokenSeq& phrase) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>>
      vectors_;
};

// Optional "count dim" header, then `word v1 ... vd` per line.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

class MathError : public Error {
 public:
  enum class Kind { kZeroVector, kDimensionMismatch };

  MathError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// dot(u, v) / (|u| |v|), clamped to [-1, 1].
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace evgen
