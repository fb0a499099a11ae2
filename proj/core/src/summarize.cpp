#include "evgen/summarize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "text.hpp"

namespace evgen {

void SummaryConfig::validate() const {
  if (budget == 0) throw std::invalid_argument("summary budget must be >= 1");
}

std::string Evidence::text() const {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

ItemSet sentence_coverage(const Document& doc, std::size_t sentence,
                          const SkeletonAnnotation& annotation) {
  ItemSet items;
  for (const auto& span : annotation.spans)
    if (span.sentence == sentence)
      items.insert(ItemId{span.label, span_text(doc, span), span.group});
  return items;
}

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& bits) {
  std::size_t n = 0;
  for (auto w : bits) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

std::size_t gain(const Bits& covered, const Bits& add) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < covered.size(); ++i)
    n += static_cast<std::size_t>(__builtin_popcountll(add[i] & ~covered[i]));
  return n;
}

void merge(Bits& covered, const Bits& add) {
  for (std::size_t i = 0; i < covered.size(); ++i) covered[i] |= add[i];
}

struct Solution {
  std::vector<std::size_t> picks;  // ascending
  std::size_t covered = 0;
  std::size_t cost = 0;
};

bool better(const Solution& a, const Solution& b) {
  if (a.covered != b.covered) return a.covered > b.covered;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.picks < b.picks;
}

}  // namespace

std::vector<std::size_t> select_budgeted(std::span<const ItemSet> coverage,
                                         std::span<const std::size_t> costs,
                                         std::size_t budget) {
  if (coverage.size() != costs.size())
    throw std::invalid_argument("coverage and cost lists differ in length");

  std::map<ItemId, std::size_t> item_ids;
  for (const auto& items : coverage)
    for (const auto& item : items) item_ids.emplace(item, item_ids.size());
  const std::size_t words = (item_ids.size() + 63) / 64;

  // Only sentences that cover something and fit on their own can help.
  std::vector<std::size_t> useful;
  std::vector<Bits> bits(coverage.size(), Bits(words, 0));
  for (std::size_t i = 0; i < coverage.size(); ++i) {
    for (const auto& item : coverage[i]) {
      std::size_t id = item_ids.at(item);
      bits[i][id / 64] |= std::uint64_t{1} << (id % 64);
    }
    if (!coverage[i].empty() && costs[i] <= budget) useful.push_back(i);
  }

  Solution best;
  auto consider = [&](std::vector<std::size_t> picks) {
    Bits covered(words, 0);
    std::size_t cost = 0;
    for (auto i : picks) {
      merge(covered, bits[i]);
      cost += costs[i];
    }
    if (cost > budget) return;
    std::sort(picks.begin(), picks.end());
    Solution s{std::move(picks), popcount(covered), cost};
    if (better(s, best)) best = std::move(s);
  };

  auto extend = [&](std::vector<std::size_t> picks) {
    Bits covered(words, 0);
    std::size_t cost = 0;
    std::vector<bool> used(coverage.size(), false);
    for (auto i : picks) {
      merge(covered, bits[i]);
      cost += costs[i];
      used[i] = true;
    }
    if (cost > budget) return;
    while (true) {
      std::optional<std::size_t> pick;
      std::size_t pick_gain = 0;
      for (auto i : useful) {
        if (used[i] || cost + costs[i] > budget) continue;
        std::size_t g = gain(covered, bits[i]);
        if (g == 0) continue;
        if (!pick) {
          pick = i;
          pick_gain = g;
          continue;
        }
        // Compare g / costs[i] against pick_gain / costs[*pick] exactly.
        const std::size_t lhs = g * costs[*pick];
        const std::size_t rhs = pick_gain * costs[i];
        if (lhs > rhs || (lhs == rhs && (g > pick_gain ||
                                         (g == pick_gain && costs[i] < costs[*pick])))) {
          pick = i;
          pick_gain = g;
        }
      }
      if (!pick) break;
      used[*pick] = true;
      merge(covered, bits[*pick]);
      cost += costs[*pick];
      picks.push_back(*pick);
    }
    consider(std::move(picks));
  };

  const std::size_t m = useful.size();
  for (std::size_t a = 0; a < m; ++a) {
    consider({useful[a]});
    for (std::size_t b = a + 1; b < m; ++b) {
      consider({useful[a], useful[b]});
      for (std::size_t c = b + 1; c < m; ++c) extend({useful[a], useful[b], useful[c]});
    }
  }
  return best.picks;
}

std::vector<std::size_t> select_sentences(const Document& doc,
                                          const SkeletonAnnotation& annotation,
                                          const SummaryConfig& config) {
  config.validate();
  std::vector<ItemSet> coverage(doc.sentences().size());
  for (const auto& span : annotation.spans)
    if (span.sentence < coverage.size())
      coverage[span.sentence].insert(
          ItemId{span.label, span_text(doc, span), span.group});
  std::vector<std::size_t> costs;
  costs.reserve(doc.sentences().size());
  for (const auto& s : doc.sentences()) costs.push_back(s.token_count());
  return select_budgeted(coverage, costs, config.budget);
}

namespace {

struct Marker {
  std::vector<std::string_view> words;
};

const std::vector<Marker>& discourse_markers() {
  static const std::vector<Marker> markers = {
      {{"however"}}, {{"moreover"}}, {{"in", "addition"}}, {{"furthermore"}}};
  return markers;
}

bool only_space(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size())
    if (!text::is_space(text::next_code_point(s, pos))) return false;
  return true;
}

bool word_char(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t start = pos;
    char32_t c = text::next_code_point(s, pos);
    if (text::is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace

std::string compress_sentence(const Document& doc, std::size_t sentence_index,
                              const SkeletonAnnotation& annotation) {
  const Sentence& sentence = doc.sentences().at(sentence_index);
  const std::string_view text = doc.text(sentence);
  const auto tokens = doc.sentence_tokens(sentence_index);
  const std::size_t base = sentence.start;

  std::vector<bool> is_protected(text.size(), false);
  std::vector<bool> token_protected(tokens.size(), false);
  for (const auto& span : annotation.spans) {
    if (span.sentence != sentence_index) continue;
    for (std::size_t t = span.token_begin; t < span.token_end; ++t) {
      token_protected[t - sentence.token_begin] = true;
      const Token& tok = doc.tokens()[t];
      std::fill(is_protected.begin() + static_cast<std::ptrdiff_t>(tok.start - base),
                is_protected.begin() + static_cast<std::ptrdiff_t>(tok.end - base), true);
    }
  }

  std::vector<bool> deleted(text.size(), false);
  auto erase = [&](std::size_t from, std::size_t to) {
    std::fill(deleted.begin() + static_cast<std::ptrdiff_t>(from),
              deleted.begin() + static_cast<std::ptrdiff_t>(to), true);
  };

  // Rule 1: leading discourse marker and its comma.
  for (const Marker& marker : discourse_markers()) {
    const std::size_t n = marker.words.size();
    if (tokens.size() <= n) continue;
    bool match = tokens[0].start == base;
    for (std::size_t i = 0; match && i < n; ++i) {
      match = tokens[i].norm == marker.words[i] && !token_protected[i];
      if (match && i > 0)
        match = only_space(text.substr(tokens[i - 1].end - base,
                                       tokens[i].start - tokens[i - 1].end));
    }
    if (!match) continue;
    std::size_t pos = tokens[n - 1].end - base;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size() || text[pos] != ',') continue;
    ++pos;
    while (pos < text.size()) {
      std::size_t probe = pos;
      if (!text::is_space(text::next_code_point(text, probe))) break;
      pos = probe;
    }
    erase(0, pos);
    break;
  }

  // Rule 2: outermost parenthesized segments without skeleton tokens.
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') {
      open.push_back(i);
    } else if (text[i] == ')' && !open.empty()) {
      std::size_t from = open.back();
      open.pop_back();
      if (!open.empty()) continue;
      bool keep = false;
      for (std::size_t j = from; j <= i && !keep; ++j)
        keep = is_protected[j] || deleted[j];
      if (keep) continue;
      while (from > 0 && (text[from - 1] == ' ' || text[from - 1] == '\t')) --from;
      erase(from, i + 1);
    }
  }

  // Rule 3: splice, keeping neighbouring words apart, then collapse.
  std::string kept;
  kept.reserve(text.size());
  bool gap = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (deleted[i]) {
      gap = true;
      continue;
    }
    const auto c = static_cast<unsigned char>(text[i]);
    if (gap && !kept.empty() && word_char(static_cast<unsigned char>(kept.back())) &&
        word_char(c))
      kept.push_back(' ');
    gap = false;
    kept.push_back(text[i]);
  }
  return collapse_whitespace(kept);
}

bool responsive(std::span<const std::string> texts, const ExpandedQuery& query) {
  std::vector<std::vector<std::string>> norms;
  norms.reserve(texts.size());
  for (const auto& t : texts) norms.push_back(token_norms(t));
  for (const auto& group : query.groups) {
    bool found = false;
    for (const auto& form : group.forms) {
      for (const auto& n : norms) {
        if (std::search(n.begin(), n.end(), form.begin(), form.end()) != n.end()) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

EvidenceOutcome generate_evidence(const Document& doc,
                                  const SkeletonAnnotation& annotation,
                                  const ExpandedQuery& query,
                                  const SummaryConfig& config) {
  auto picks = select_sentences(doc, annotation, config);
  if (picks.empty()) return NoEvidence{NoEvidence::Reason::kEmptySelection};

  Evidence evidence;
  evidence.doc_id = doc.id();
  std::vector<std::string> texts;
  for (auto i : picks) {
    std::string text = config.compression
                           ? compress_sentence(doc, i, annotation)
                           : std::string(doc.text(doc.sentences()[i]));
    texts.push_back(text);
    evidence.sentences.push_back({i, std::move(text)});
    auto items = sentence_coverage(doc, i, annotation);
    evidence.covered_items.insert(items.begin(), items.end());
  }
  if (!responsive(texts, query)) return NoEvidence{NoEvidence::Reason::kUnresponsive};

  for (const auto& group : query.groups) evidence.query.entities.push_back(group.source);
  evidence.skeleton = annotation;
  return evidence;
}

}  // namespace evgen
