#include "evgen/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evgen/phrase_matcher.hpp"

namespace evgen {

std::string_view to_string(SpanLabel label) {
  switch (label) {
    case SpanLabel::kExactMatch: return "exact_match";
    case SpanLabel::kTrigger: return "trigger";
    case SpanLabel::kSimilar: return "similar";
  }
  return "unknown";
}

void SkeletonConfig::validate() const {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("skeleton tau must lie in (0, 1]");
}

std::string span_text(const Document& doc, const SkeletonSpan& span) {
  std::string out;
  for (std::size_t i = span.token_begin; i < span.token_end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += doc.tokens()[i].norm;
  }
  return out;
}

namespace {

std::vector<SkeletonSpan> match_phrases(const Document& doc,
                                        const PhraseMatcher& matcher,
                                        SpanLabel label, bool has_group) {
  std::vector<SkeletonSpan> spans;
  if (matcher.empty()) return spans;
  for (const Sentence& sentence : doc.sentences()) {
    for (const auto& m : matcher.find_all(doc.sentence_tokens(sentence.index))) {
      SkeletonSpan span;
      span.sentence = sentence.index;
      span.token_begin = sentence.token_begin + m.begin;
      span.token_end = sentence.token_begin + m.end;
      span.label = label;
      span.score = 1.0;
      if (has_group) span.group = m.payload;
      spans.push_back(span);
    }
  }
  return spans;
}

double norm_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<SkeletonSpan> match_exact(const Document& doc,
                                      const ExpandedQuery& query) {
  PhraseMatcher matcher;
  for (std::size_t g = 0; g < query.groups.size(); ++g)
    for (const auto& form : query.groups[g].forms)
      matcher.add(form, static_cast<std::uint32_t>(g));
  return match_phrases(doc, matcher, SpanLabel::kExactMatch, true);
}

std::vector<SkeletonSpan> match_triggers(const Document& doc,
                                         const TriggerLexicon& lexicon) {
  PhraseMatcher matcher;
  for (const auto& phrase : lexicon.phrases()) matcher.add(phrase, 0);
  return match_phrases(doc, matcher, SpanLabel::kTrigger, false);
}

std::vector<SkeletonSpan> match_similar(const Document& doc,
                                        const ExpandedQuery& query,
                                        const EmbeddingTable& embeddings,
                                        const WordSet& stopwords,
                                        const SkeletonConfig& config) {
  config.validate();
  std::vector<SkeletonSpan> spans;
  if (embeddings.empty() || config.max_similar_per_sentence == 0) return spans;

  struct Target {
    std::size_t group;
    std::vector<double> vector;
  };
  std::vector<Target> targets;
  for (std::size_t g = 0; g < query.groups.size(); ++g) {
    for (const auto& form : query.groups[g].forms) {
      auto v = embeddings.phrase_vector(form);
      if (v && norm_of(*v) > 0) targets.push_back({g, std::move(*v)});
    }
  }
  if (targets.empty()) return spans;

  std::vector<bool> exact(doc.tokens().size(), false);
  for (const auto& span : match_exact(doc, query))
    std::fill(exact.begin() + static_cast<std::ptrdiff_t>(span.token_begin),
              exact.begin() + static_cast<std::ptrdiff_t>(span.token_end), true);

  for (const Sentence& sentence : doc.sentences()) {
    std::vector<SkeletonSpan> candidates;
    for (std::size_t t = sentence.token_begin; t < sentence.token_end; ++t) {
      const Token& token = doc.tokens()[t];
      if (exact[t] || stopwords.contains(token.norm)) continue;
      const auto* v = embeddings.find(token.norm);
      if (v == nullptr || norm_of(*v) == 0) continue;
      double best = -2.0;
      std::size_t best_group = 0;
      for (const auto& target : targets) {
        double c = cosine(*v, target.vector);
        if (c > best) {
          best = c;
          best_group = target.group;
        }
      }
      if (best < config.tau) continue;
      SkeletonSpan span;
      span.sentence = sentence.index;
      span.token_begin = t;
      span.token_end = t + 1;
      span.label = SpanLabel::kSimilar;
      span.score = best;
      span.group = best_group;
      candidates.push_back(span);
    }
    if (candidates.size() > config.max_similar_per_sentence) {
      std::stable_sort(candidates.begin(), candidates.end(),
                       [](const SkeletonSpan& a, const SkeletonSpan& b) {
                         return a.score > b.score;
                       });
      candidates.resize(config.max_similar_per_sentence);
      std::sort(candidates.begin(), candidates.end(),
                [](const SkeletonSpan& a, const SkeletonSpan& b) {
                  return a.token_begin < b.token_begin;
                });
    }
    spans.insert(spans.end(), candidates.begin(), candidates.end());
  }
  return spans;
}

std::vector<SkeletonSpan> resolve_overlaps(std::vector<SkeletonSpan> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const SkeletonSpan& a, const SkeletonSpan& b) {
              if (a.label != b.label) return a.label < b.label;
              if (a.length() != b.length()) return a.length() > b.length();
              if (a.token_begin != b.token_begin) return a.token_begin < b.token_begin;
              return a.group < b.group;
            });
  std::size_t extent = 0;
  for (const auto& s : spans) extent = std::max(extent, s.token_end);
  std::vector<bool> taken(extent, false);
  std::vector<SkeletonSpan> kept;
  for (const auto& s : spans) {
    bool free = true;
    for (std::size_t t = s.token_begin; t < s.token_end && free; ++t) free = !taken[t];
    if (!free) continue;
    for (std::size_t t = s.token_begin; t < s.token_end; ++t) taken[t] = true;
    kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end(),
            [](const SkeletonSpan& a, const SkeletonSpan& b) {
              if (a.sentence != b.sentence) return a.sentence < b.sentence;
              return a.token_begin < b.token_begin;
            });
  return kept;
}

SkeletonAnnotation extract_skeleton(const Document& doc,
                                    const ExpandedQuery& query,
                                    const TriggerLexicon& lexicon,
                                    const EmbeddingTable& embeddings,
                                    const WordSet& stopwords,
                                    const SkeletonConfig& config) {
  config.validate();
  std::vector<SkeletonSpan> all = match_exact(doc, query);
  auto triggers = match_triggers(doc, lexicon);
  auto similar = match_similar(doc, query, embeddings, stopwords, config);
  all.insert(all.end(), triggers.begin(), triggers.end());
  all.insert(all.end(), similar.begin(), similar.end());

  SkeletonAnnotation annotation;
  annotation.doc_id = doc.id();
  annotation.spans = resolve_overlaps(std::move(all));
  annotation.tau = config.tau;
  return annotation;
}

}  // namespace evgen
