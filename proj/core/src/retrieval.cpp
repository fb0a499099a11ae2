#include "evgen/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace evgen {

void Bm25Params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1))
    throw RetrievalError(RetrievalError::Kind::kInvalidArgument,
                         "bm25 k1 must be >= 0");
  if (!(b >= 0.0 && b <= 1.0))
    throw RetrievalError(RetrievalError::Kind::kInvalidArgument,
                         "bm25 b must lie in [0, 1]");
}

InvertedIndex InvertedIndex::build(std::span<const Document> docs) {
  InvertedIndex index;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> provisional;
  std::vector<std::string> provisional_terms;

  index.doc_ids_.reserve(docs.size());
  index.titles_.reserve(docs.size());
  index.bodies_.reserve(docs.size());
  index.doc_lengths_.reserve(docs.size());
  std::unordered_map<std::string_view, std::uint32_t> seen_ids;

  for (const Document& doc : docs) {
    if (!seen_ids.emplace(doc.id(), 0).second)
      throw RetrievalError(RetrievalError::Kind::kDuplicateId,
                           "DuplicateId: " + doc.id());
    index.doc_ids_.push_back(doc.id());
    index.titles_.push_back(doc.title());
    index.bodies_.push_back(doc.body());
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(doc.tokens().size()));

    bool first_sentence = true;
    for (const Sentence& sentence : doc.sentences()) {
      if (sentence.token_count() == 0) continue;
      if (!first_sentence) index.forward_.push_back(kSentenceBreak);
      first_sentence = false;
      for (const Token& token : doc.sentence_tokens(sentence.index)) {
        auto [it, inserted] = provisional.try_emplace(
            token.norm, static_cast<std::uint32_t>(provisional_terms.size()));
        if (inserted) provisional_terms.push_back(token.norm);
        index.forward_.push_back(it->second);
      }
    }
    index.forward_offsets_.push_back(index.forward_.size());
  }

  // Renumber terms in lexicographic order.
  std::vector<std::uint32_t> order(provisional_terms.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return provisional_terms[a] < provisional_terms[b];
  });
  std::vector<std::uint32_t> remap(order.size());
  index.terms_.reserve(order.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = rank;
    index.terms_.push_back(std::move(provisional_terms[order[rank]]));
  }
  for (auto& id : index.forward_)
    if (id != kSentenceBreak) id = remap[id];

  index.postings_.resize(index.terms_.size());
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t d = 0; d < index.doc_ids_.size(); ++d) {
    scratch.clear();
    for (std::uint32_t id : index.forward(d))
      if (id != kSentenceBreak) scratch.push_back(id);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t i = 0; i < scratch.size();) {
      std::size_t j = i;
      while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
      index.postings_[scratch[i]].push_back(
          Posting{d, static_cast<std::uint32_t>(j - i)});
      i = j;
    }
  }

  index.finalize();
  return index;
}

void InvertedIndex::finalize() {
  term_lookup_.clear();
  term_lookup_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) term_lookup_.emplace(terms_[i], i);
  doc_lookup_.clear();
  doc_lookup_.reserve(doc_ids_.size());
  for (std::uint32_t i = 0; i < doc_ids_.size(); ++i) doc_lookup_.emplace(doc_ids_[i], i);

  stats_.doc_count = doc_ids_.size();
  double total = 0;
  for (auto len : doc_lengths_) total += len;
  stats_.avg_doc_length =
      doc_ids_.empty() ? 0.0 : total / static_cast<double>(doc_ids_.size());
}

std::optional<std::uint32_t> InvertedIndex::term_id(std::string_view term) const {
  auto it = term_lookup_.find(term);
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto id = term_id(term);
  if (!id) return {};
  return postings_[*id];
}

std::size_t InvertedIndex::doc_frequency(std::string_view term) const {
  return postings(term).size();
}

std::uint32_t InvertedIndex::term_frequency(std::uint32_t doc,
                                            std::string_view term) const {
  auto list = postings(term);
  auto it = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const Posting& p, std::uint32_t d) { return p.doc < d; });
  return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

const std::string& InvertedIndex::doc_id(std::uint32_t doc) const {
  if (doc >= doc_ids_.size())
    throw RetrievalError(RetrievalError::Kind::kUnknownDocument,
                         "UnknownDocument: ordinal " + std::to_string(doc));
  return doc_ids_[doc];
}

std::optional<std::uint32_t> InvertedIndex::find_doc(std::string_view id) const {
  auto it = doc_lookup_.find(id);
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t InvertedIndex::doc_length(std::uint32_t doc) const {
  if (doc >= doc_lengths_.size())
    throw RetrievalError(RetrievalError::Kind::kUnknownDocument,
                         "UnknownDocument: ordinal " + std::to_string(doc));
  return doc_lengths_[doc];
}

Document InvertedIndex::document(std::uint32_t doc) const {
  return Document(doc_id(doc), titles_[doc], bodies_[doc]);
}

std::span<const std::uint32_t> InvertedIndex::forward(std::uint32_t doc) const {
  return std::span<const std::uint32_t>(forward_).subspan(
      forward_offsets_[doc], forward_offsets_[doc + 1] - forward_offsets_[doc]);
}

bool InvertedIndex::contains_phrase(std::uint32_t doc,
                                    const TokenSeq& phrase) const {
  if (phrase.empty() || doc >= doc_ids_.size()) return false;
  std::vector<std::uint32_t> ids;
  ids.reserve(phrase.size());
  for (const auto& token : phrase) {
    auto id = term_id(token);
    if (!id) return false;
    ids.push_back(*id);
  }
  auto stream = forward(doc);
  return std::search(stream.begin(), stream.end(), ids.begin(), ids.end()) !=
         stream.end();
}

std::vector<std::uint32_t> InvertedIndex::docs_with_phrase(
    const TokenSeq& phrase) const {
  std::vector<std::uint32_t> docs;
  if (phrase.empty()) return docs;

  std::vector<std::span<const Posting>> lists;
  for (const auto& token : phrase) {
    auto list = postings(token);
    if (list.empty()) return docs;
    lists.push_back(list);
  }
  std::sort(lists.begin(), lists.end(),
            [](auto a, auto b) { return a.size() < b.size(); });

  for (const Posting& p : lists.front()) docs.push_back(p.doc);
  for (std::size_t i = 1; i < lists.size() && !docs.empty(); ++i) {
    std::vector<std::uint32_t> kept;
    auto it = lists[i].begin();
    for (std::uint32_t d : docs) {
      it = std::lower_bound(it, lists[i].end(), d,
                            [](const Posting& p, std::uint32_t x) { return p.doc < x; });
      if (it == lists[i].end()) break;
      if (it->doc == d) kept.push_back(d);
    }
    docs.swap(kept);
  }
  if (phrase.size() > 1)
    std::erase_if(docs, [&](std::uint32_t d) { return !contains_phrase(d, phrase); });
  return docs;
}

double idf(const InvertedIndex& index, std::string_view term) {
  const double n = static_cast<double>(index.stats().doc_count);
  if (index.stats().doc_count == 0)
    throw RetrievalError(RetrievalError::Kind::kEmptyIndex,
                         "EmptyIndex: idf is undefined without documents");
  const double df = static_cast<double>(index.doc_frequency(term));
  return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

std::vector<std::string> scoring_terms(const ExpandedQuery& query) {
  std::set<std::string> terms;
  for (const auto& group : query.groups)
    for (const auto& form : group.forms) terms.insert(form.begin(), form.end());
  return {terms.begin(), terms.end()};
}

namespace {

double score_terms(const InvertedIndex& index, std::uint32_t doc,
                   std::span<const std::string> terms,
                   std::span<const double> idfs, const Bm25Params& params) {
  const double norm =
      params.k1 * (1.0 - params.b +
                   params.b * index.doc_length(doc) / index.stats().avg_doc_length);
  double score = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double tf = index.term_frequency(doc, terms[i]);
    if (tf == 0) continue;
    score += idfs[i] * tf * (params.k1 + 1.0) / (tf + norm);
  }
  return score;
}

}  // namespace

double bm25_score(const InvertedIndex& index, std::uint32_t doc,
                  const ExpandedQuery& query, const Bm25Params& params) {
  params.validate();
  if (index.doc_count() == 0)
    throw RetrievalError(RetrievalError::Kind::kEmptyIndex,
                         "EmptyIndex: cannot score against an empty index");
  if (doc >= index.doc_count())
    throw RetrievalError(RetrievalError::Kind::kUnknownDocument,
                         "UnknownDocument: ordinal " + std::to_string(doc));
  auto terms = scoring_terms(query);
  std::vector<double> idfs;
  idfs.reserve(terms.size());
  for (const auto& t : terms) idfs.push_back(idf(index, t));
  return score_terms(index, doc, terms, idfs, params);
}

std::vector<SearchHit> search(const InvertedIndex& index,
                              const ExpandedQuery& query, std::size_t k,
                              const Bm25Params& params) {
  params.validate();
  if (k == 0)
    throw RetrievalError(RetrievalError::Kind::kInvalidArgument,
                         "search depth k must be >= 1");
  std::vector<SearchHit> hits;
  if (index.doc_count() == 0 || query.groups.empty()) return hits;

  std::vector<std::uint32_t> candidates;
  bool first = true;
  for (const auto& group : query.groups) {
    std::vector<std::uint32_t> group_docs;
    for (const auto& form : group.forms) {
      auto docs = index.docs_with_phrase(form);
      std::vector<std::uint32_t> merged;
      merged.reserve(group_docs.size() + docs.size());
      std::set_union(group_docs.begin(), group_docs.end(), docs.begin(),
                     docs.end(), std::back_inserter(merged));
      group_docs.swap(merged);
    }
    if (first) {
      candidates.swap(group_docs);
      first = false;
    } else {
      std::vector<std::uint32_t> kept;
      std::set_intersection(candidates.begin(), candidates.end(),
                            group_docs.begin(), group_docs.end(),
                            std::back_inserter(kept));
      candidates.swap(kept);
    }
    if (candidates.empty()) return hits;
  }

  auto terms = scoring_terms(query);
  std::vector<double> idfs;
  idfs.reserve(terms.size());
  for (const auto& t : terms) idfs.push_back(idf(index, t));

  hits.reserve(candidates.size());
  for (std::uint32_t d : candidates)
    hits.push_back(SearchHit{index.doc_id(d), d,
                             score_terms(index, d, terms, idfs, params), 0});
  auto better = [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k),
                      hits.end(), better);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), better);
  }
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i].rank = i + 1;
  return hits;
}

}  // namespace evgen
