#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/error.hpp"

namespace evgen {

// Offsets throughout the library are UTF-8 byte offsets into NFC-normalized
// text.

enum class Field : std::uint8_t { kTitle, kBody };

struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string norm;
  std::size_t sentence_index = 0;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t index = 0;
  Field field = Field::kBody;
  // Half-open range into Document::tokens().
  std::size_t token_begin = 0;
  std::size_t token_end = 0;

  std::size_t token_count() const { return token_end - token_begin; }
  bool operator==(const Sentence&) const = default;
};

// Maximal runs of Unicode letters/digits, lowercased. Offsets index `text`.
// Every token gets sentence_index 0; Document assigns the real value.
std::vector<Token> tokenize(std::string_view text);

// Convenience: just the norms of tokenize(text).
std::vector<std::string> token_norms(std::string_view text);

// A boundary follows '.', '?' or '!' when the terminator is followed by
// whitespace and then an uppercase letter, or by trailing whitespace only.
// Spans exclude surrounding whitespace and include the terminator.
std::vector<Sentence> split_sentences(std::string_view text);

std::string nfc_normalize(std::string_view text);

// An abstract plus its title, segmented once at construction. When the title
// has any non-whitespace content it becomes sentence 0 and its tokens come
// first; body sentences follow.
class Document {
 public:
  Document() = default;
  Document(std::string doc_id, std::string_view title, std::string_view body);

  const std::string& id() const { return id_; }
  const std::string& title() const { return title_; }
  const std::string& body() const { return body_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::vector<Token>& tokens() const { return tokens_; }

  const std::string& field_text(Field field) const {
    return field == Field::kTitle ? title_ : body_;
  }
  std::string_view text(const Sentence& sentence) const;
  std::string_view text(const Token& token) const;
  std::span<const Token> sentence_tokens(std::size_t sentence_index) const;

  bool operator==(const Document&) const = default;

 private:
  std::string id_;
  std::string title_;
  std::string body_;
  std::vector<Sentence> sentences_;
  std::vector<Token> tokens_;
};

enum class ParseMode { kStrict, kLenient };

class CorpusError : public LineError {
 public:
  enum class Kind { kMalformedLine, kMissingField, kDuplicateId };

  CorpusError(Kind kind, std::size_t line, std::string detail);

  Kind kind() const noexcept { return kind_; }
  // Field name for kMissingField, doc id for kDuplicateId.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Kind kind_;
  std::string detail_;
};

struct CorpusIssue {
  CorpusError::Kind kind;
  std::size_t line;
  std::string detail;
};

struct ParsedCorpus {
  std::vector<Document> documents;
  // Only populated in lenient mode.
  std::vector<CorpusIssue> skipped;
};

// JSONL with required string fields "id", "title" and "abstract"; unknown
// fields are ignored and whitespace-only lines are skipped. Strict mode
// throws CorpusError on the first bad line; lenient mode records and skips
// it (a duplicate id keeps the first document).
ParsedCorpus parse_corpus(std::istream& in, ParseMode mode = ParseMode::kStrict);

std::string_view to_string(CorpusError::Kind kind);

}  // namespace evgen
