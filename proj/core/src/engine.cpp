#include "evgen/engine.hpp"

#include <stdexcept>

#include "text.hpp"

namespace evgen {

Query parse_query(std::string_view raw) {
  Query query;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t comma = raw.find(',', pos);
    if (comma == std::string_view::npos) comma = raw.size();
    std::string_view part = text::trim(raw.substr(pos, comma - pos));
    pos = comma + 1;
    if (part.empty()) continue;

    Entity entity;
    if (auto colon = part.find(':'); colon != std::string_view::npos) {
      if (auto type = parse_entity_type(text::trim(part.substr(0, colon)))) {
        entity.type = *type;
        part = text::trim(part.substr(colon + 1));
      }
    }
    if (part.empty() || to_token_seq(part).empty())
      throw QueryError(QueryError::Kind::kBadEntity,
                       "query entity has no searchable text: '" + std::string(part) + "'");
    entity.surface = std::string(part);
    query.entities.push_back(std::move(entity));
  }
  if (query.entities.empty())
    throw QueryError(QueryError::Kind::kEmptyQuery, "EmptyQuery: no entities given");
  return query;
}

Engine::Engine(EngineResources resources, EngineConfig config)
    : resources_(std::move(resources)), config_(std::move(config)) {
  if (config_.k == 0) throw ConfigError("k must be >= 1", 0);
  try {
    config_.bm25.validate();
    config_.skeleton.validate();
    config_.summary.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
}

Engine Engine::open(const EngineConfig& config) {
  config.validate();
  if (config.index.empty()) throw ConfigError("no index path configured", 0);
  EngineResources r;
  r.index = InvertedIndex::load(config.index);
  if (!config.synonyms.empty()) r.synonyms = load_synonym_kb(config.synonyms);
  if (!config.triggers.empty()) r.triggers = load_trigger_lexicon(config.triggers);
  if (!config.embeddings.empty()) r.embeddings = load_embeddings(config.embeddings);
  if (!config.stopwords.empty()) r.stopwords = load_word_list(config.stopwords);
  return Engine(std::move(r), config);
}

EvidenceSet Engine::run(std::string_view raw_query,
                        std::optional<std::size_t> k) const {
  EvidenceSet set;
  set.raw_query = std::string(raw_query);
  set.query = parse_query(raw_query);
  try {
    set.expanded = expand_query(set.query, resources_.synonyms);
  } catch (const std::invalid_argument& e) {
    throw QueryError(QueryError::Kind::kBadEntity, e.what());
  }

  const auto& index = resources_.index;
  if (index.doc_count() == 0)
    throw RetrievalError(RetrievalError::Kind::kEmptyIndex,
                         "EmptyIndex: the loaded index holds no documents");
  const std::size_t depth = k.value_or(config_.k);
  if (depth == 0) throw QueryError(QueryError::Kind::kBadEntity, "k must be >= 1");

  for (auto& hit : search(index, set.expanded, depth, config_.bm25)) {
    Document doc = index.document(hit.doc);
    auto skeleton = extract_skeleton(doc, set.expanded, resources_.triggers,
                                     resources_.embeddings, resources_.stopwords,
                                     config_.skeleton);
    std::vector<std::string> texts;
    texts.reserve(skeleton.spans.size());
    for (const auto& span : skeleton.spans) texts.push_back(span_text(doc, span));
    auto evidence = generate_evidence(doc, skeleton, set.expanded, config_.summary);
    set.results.push_back(
        {std::move(hit), std::move(skeleton), std::move(texts), std::move(evidence)});
  }
  return set;
}

EvidenceSet run_pipeline(std::string_view raw_query, const EngineConfig& config) {
  return Engine::open(config).run(raw_query);
}

}  // namespace evgen
