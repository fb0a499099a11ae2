#include "evgen/kb.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "evgen/corpus.hpp"
#include "text.hpp"

namespace evgen {

TokenSeq to_token_seq(std::string_view surface) {
  return token_norms(nfc_normalize(surface));
}

std::string join(const TokenSeq& seq) {
  std::string out;
  for (const auto& token : seq) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::optional<EntityType> parse_entity_type(std::string_view name) {
  if (name == "disease") return EntityType::kDisease;
  if (name == "gene") return EntityType::kGene;
  if (name == "drug") return EntityType::kDrug;
  if (name == "other") return EntityType::kOther;
  return std::nullopt;
}

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::kDisease: return "disease";
    case EntityType::kGene: return "gene";
    case EntityType::kDrug: return "drug";
    case EntityType::kOther: return "other";
  }
  return "other";
}

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw KbError(KbError::Kind::kIo, 0, "cannot open " + path.string());
  return in;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    parts.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) parts.push_back(line.substr(start, pos - start));
  }
  return parts;
}

std::string_view chomp(const std::string& line) {
  std::string_view view(line);
  if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
  return view;
}

}  // namespace

void SynonymKB::add(EntityType type, std::string_view canonical,
                    std::string_view alias) {
  TokenSeq key = to_token_seq(canonical);
  TokenSeq form = to_token_seq(alias);
  if (key.empty() || form.empty())
    throw std::invalid_argument("synonym forms must contain a token");
  auto& forms = entries_[{type, key}];
  forms.insert(key);
  forms.insert(std::move(form));
}

const std::set<TokenSeq>* SynonymKB::find(EntityType type,
                                          const TokenSeq& canonical) const {
  auto it = entries_.find({type, canonical});
  return it == entries_.end() ? nullptr : &it->second;
}

std::set<TokenSeq> SynonymKB::find_any(const TokenSeq& canonical) const {
  std::set<TokenSeq> out;
  for (EntityType type : {EntityType::kDisease, EntityType::kGene,
                          EntityType::kDrug, EntityType::kOther}) {
    if (const auto* forms = find(type, canonical))
      out.insert(forms->begin(), forms->end());
  }
  return out;
}

void SynonymKB::write_tsv(std::ostream& out) const {
  for (const auto& [key, forms] : entries_) {
    const std::string canonical = join(key.second);
    bool wrote = false;
    for (const auto& form : forms) {
      if (form == key.second) continue;
      out << to_string(key.first) << '\t' << canonical << '\t' << join(form)
          << '\n';
      wrote = true;
    }
    if (!wrote)
      out << to_string(key.first) << '\t' << canonical << '\t' << canonical
          << '\n';
  }
}

SynonymKB read_synonym_kb(std::istream& in) {
  SynonymKB kb;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = chomp(line);
    if (text::trim(row).empty()) continue;
    auto cols = split(row, '\t');
    if (cols.size() != 3)
      throw KbError(KbError::Kind::kBadRow, line_no,
                    "BadRow at line " + std::to_string(line_no) + ": expected 3 columns, got " +
                        std::to_string(cols.size()));
    auto type = parse_entity_type(text::trim(cols[0]));
    if (!type)
      throw KbError(KbError::Kind::kUnknownEntityType, line_no,
                    "UnknownEntityType at line " + std::to_string(line_no) +
                        ": '" + std::string(cols[0]) + "'");
    try {
      kb.add(*type, cols[1], cols[2]);
    } catch (const std::invalid_argument&) {
      throw KbError(KbError::Kind::kBadRow, line_no,
                    "BadRow at line " + std::to_string(line_no) +
                        ": empty canonical or alias");
    }
  }
  return kb;
}

SynonymKB load_synonym_kb(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_synonym_kb(in);
}

ExpandedQuery expand_query(const Query& query, const SynonymKB& kb) {
  ExpandedQuery expanded;
  expanded.groups.reserve(query.entities.size());
  for (const Entity& entity : query.entities) {
    EntityGroup group;
    group.source = entity;
    group.source_form = to_token_seq(entity.surface);
    if (group.source_form.empty())
      throw std::invalid_argument("query entity '" + entity.surface +
                                  "' has no tokens");
    if (entity.type == EntityType::kOther) {
      group.forms = kb.find_any(group.source_form);
    } else if (const auto* forms = kb.find(entity.type, group.source_form)) {
      group.forms = *forms;
    }
    group.forms.insert(group.source_form);
    expanded.groups.push_back(std::move(group));
  }
  return expanded;
}

namespace {

template <typename Fn>
void for_each_phrase_line(std::istream& in, Fn&& fn) {
  std::string line;
  while (std::getline(in, line)) {
    std::string_view trimmed = text::trim(chomp(line));
    if (trimmed.empty() || trimmed.front() == '#') continue;
    fn(trimmed);
  }
}

}  // namespace

TriggerLexicon read_trigger_lexicon(std::istream& in) {
  std::set<TokenSeq> phrases;
  for_each_phrase_line(in, [&](std::string_view line) {
    TokenSeq seq = to_token_seq(line);
    if (!seq.empty()) phrases.insert(std::move(seq));
  });
  return TriggerLexicon(std::move(phrases));
}

TriggerLexicon load_trigger_lexicon(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_trigger_lexicon(in);
}

WordSet read_word_list(std::istream& in) {
  WordSet words;
  for_each_phrase_line(in, [&](std::string_view line) {
    for (auto& token : to_token_seq(line)) words.insert(std::move(token));
  });
  return words;
}

WordSet load_word_list(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_word_list(in);
}

void EmbeddingTable::insert(std::string word, std::vector<double> vector) {
  if (vector.empty())
    throw std::invalid_argument("embedding vectors must be non-empty");
  if (dimension_ != 0 && vector.size() != dimension_)
    throw std::invalid_argument("embedding dimension mismatch");
  for (double x : vector)
    if (!std::isfinite(x))
      throw std::invalid_argument("embedding component is not finite");
  dimension_ = vector.size();
  vectors_.try_emplace(std::move(word), std::move(vector));
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::phrase_vector(
    const TokenSeq& phrase) const {
  std::vector<double> sum(dimension_, 0.0);
  std::size_t found = 0;
  for (const auto& token : phrase) {
    const auto* v = find(token);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < dimension_; ++i) sum[i] += (*v)[i];
    ++found;
  }
  if (found == 0) return std::nullopt;
  if (found > 1)
    for (double& x : sum) x /= static_cast<double>(found);
  return sum;
}

namespace {

bool parse_count(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable read_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::size_t expected_dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(chomp(line));
    if (fields.empty()) continue;
    if (first) {
      first = false;
      std::size_t count = 0, dim = 0;
      if (fields.size() == 2 && parse_count(fields[0], count) &&
          parse_count(fields[1], dim)) {
        expected_dim = dim;
        continue;
      }
    }

    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0;
      auto [ptr, ec] = std::from_chars(fields[i].data(),
                                       fields[i].data() + fields[i].size(), x);
      if (ec != std::errc() || ptr != fields[i].data() + fields[i].size() ||
          !std::isfinite(x))
        throw KbError(KbError::Kind::kNonNumeric, line_no,
                      "NonNumeric at line " + std::to_string(line_no) + ": '" +
                          std::string(fields[i]) + "'");
      vec.push_back(x);
    }
    if (expected_dim == 0) expected_dim = vec.size();
    if (vec.empty() || vec.size() != expected_dim)
      throw KbError(KbError::Kind::kDimensionMismatch, line_no,
                    "DimensionMismatch at line " + std::to_string(line_no) +
                        ": expected " + std::to_string(expected_dim) +
                        " components, got " + std::to_string(vec.size()));

    std::string word;
    std::size_t pos = 0;
    while (pos < fields[0].size())
      text::append_lower(word, text::next_code_point(fields[0], pos));
    table.insert(std::move(word), std::move(vec));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_embeddings(in);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw MathError(MathError::Kind::kDimensionMismatch,
                    "cosine of vectors with different dimensions");
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0 || vv == 0)
    throw MathError(MathError::Kind::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / std::sqrt(uu * vv), -1.0, 1.0);
}

}  // namespace evgen
