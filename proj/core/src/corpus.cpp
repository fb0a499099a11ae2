#include "evgen/corpus.hpp"

#include <istream>
#include <unordered_set>

#include "json.hpp"
#include "text.hpp"

namespace evgen {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    char32_t c = text::next_code_point(text, pos);
    if (!text::is_alnum(c)) continue;
    Token token;
    token.start = start;
    text::append_lower(token.norm, c);
    std::size_t end = pos;
    while (pos < text.size()) {
      std::size_t probe = pos;
      char32_t d = text::next_code_point(text, probe);
      if (!text::is_alnum(d)) break;
      text::append_lower(token.norm, d);
      pos = end = probe;
    }
    token.end = end;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> token_norms(std::string_view text) {
  std::vector<std::string> norms;
  for (auto& token : tokenize(text)) norms.push_back(std::move(token.norm));
  return norms;
}

namespace {

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

// Returns the offset of the first non-whitespace code point at or after pos.
std::size_t skip_space(std::string_view text, std::size_t pos) {
  while (pos < text.size()) {
    std::size_t probe = pos;
    if (!text::is_space(text::next_code_point(text, probe))) break;
    pos = probe;
  }
  return pos;
}

// End offset of `text[begin, end)` with trailing whitespace removed.
std::size_t trim_end(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t last = begin;
  std::size_t pos = begin;
  while (pos < end) {
    char32_t c = text::next_code_point(text, pos);
    if (!text::is_space(c)) last = pos;
  }
  return last;
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t start, std::size_t end) {
    if (start >= end) return;
    Sentence s;
    s.start = start;
    s.end = end;
    s.index = sentences.size();
    sentences.push_back(s);
  };

  std::size_t start = skip_space(text, 0);
  std::size_t pos = start;
  while (pos < text.size()) {
    char c = text[pos];
    std::size_t after = pos + 1;
    if (!is_terminator(c)) {
      text::next_code_point(text, pos);
      continue;
    }
    if (after == text.size()) break;
    std::size_t next = skip_space(text, after);
    if (next == after) {
      pos = after;
      continue;
    }
    if (next == text.size()) break;
    std::size_t probe = next;
    if (text::is_upper(text::next_code_point(text, probe))) {
      emit(start, after);
      start = next;
    }
    pos = next;
  }
  if (start < text.size()) emit(start, trim_end(text, start, text.size()));
  return sentences;
}

Document::Document(std::string doc_id, std::string_view title,
                   std::string_view body)
    : id_(std::move(doc_id)), title_(nfc_normalize(title)),
      body_(nfc_normalize(body)) {
  std::size_t title_start = skip_space(title_, 0);
  if (title_start < title_.size()) {
    Sentence s;
    s.start = title_start;
    s.end = trim_end(title_, title_start, title_.size());
    s.field = Field::kTitle;
    s.token_begin = 0;
    tokens_ = tokenize(title_);
    s.token_end = tokens_.size();
    sentences_.push_back(s);
  }

  const std::size_t offset = sentences_.size();
  std::vector<Token> body_tokens = tokenize(body_);
  std::size_t t = 0;
  for (Sentence s : split_sentences(body_)) {
    s.index += offset;
    s.field = Field::kBody;
    s.token_begin = tokens_.size();
    while (t < body_tokens.size() && body_tokens[t].start < s.end) {
      body_tokens[t].sentence_index = s.index;
      tokens_.push_back(std::move(body_tokens[t]));
      ++t;
    }
    s.token_end = tokens_.size();
    sentences_.push_back(s);
  }
}

std::string_view Document::text(const Sentence& sentence) const {
  return std::string_view(field_text(sentence.field))
      .substr(sentence.start, sentence.end - sentence.start);
}

std::string_view Document::text(const Token& token) const {
  const Sentence& s = sentences_.at(token.sentence_index);
  return std::string_view(field_text(s.field))
      .substr(token.start, token.end - token.start);
}

std::span<const Token> Document::sentence_tokens(
    std::size_t sentence_index) const {
  const Sentence& s = sentences_.at(sentence_index);
  return std::span<const Token>(tokens_).subspan(s.token_begin,
                                                 s.token_count());
}

std::string_view to_string(CorpusError::Kind kind) {
  switch (kind) {
    case CorpusError::Kind::kMalformedLine: return "MalformedLine";
    case CorpusError::Kind::kMissingField: return "MissingField";
    case CorpusError::Kind::kDuplicateId: return "DuplicateId";
  }
  return "Unknown";
}

namespace {

std::string describe(CorpusError::Kind kind, std::size_t line,
                     const std::string& detail) {
  std::string msg = std::string(to_string(kind)) + " at line " +
                    std::to_string(line);
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

CorpusError::CorpusError(Kind kind, std::size_t line, std::string detail)
    : LineError(describe(kind, line, detail), line),
      kind_(kind),
      detail_(std::move(detail)) {}

ParsedCorpus parse_corpus(std::istream& in, ParseMode mode) {
  ParsedCorpus result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](CorpusError::Kind kind, std::string detail) {
    if (mode == ParseMode::kStrict)
      throw CorpusError(kind, line_no, std::move(detail));
    result.skipped.push_back({kind, line_no, std::move(detail)});
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;

    auto object = nlohmann::json::parse(line, nullptr, false);
    if (object.is_discarded() || !object.is_object()) {
      fail(CorpusError::Kind::kMalformedLine, "");
      continue;
    }

    const char* missing = nullptr;
    for (const char* field : {"id", "title", "abstract"}) {
      auto it = object.find(field);
      if (it == object.end() || !it->is_string()) {
        missing = field;
        break;
      }
    }
    if (missing == nullptr && object["id"].get_ref<const std::string&>().empty())
      missing = "id";
    if (missing != nullptr) {
      fail(CorpusError::Kind::kMissingField, missing);
      continue;
    }

    std::string id = object["id"].get<std::string>();
    if (!seen.insert(id).second) {
      fail(CorpusError::Kind::kDuplicateId, id);
      continue;
    }
    result.documents.emplace_back(std::move(id),
                                  object["title"].get_ref<const std::string&>(),
                                  object["abstract"].get_ref<const std::string&>());
  }
  return result;
}

}  // namespace evgen
