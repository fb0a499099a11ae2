#include "evgen/phrase_matcher.hpp"

#include <algorithm>

namespace evgen {

PhraseMatcher::PhraseMatcher() : nodes_(1) {}

void PhraseMatcher::add(const TokenSeq& phrase, std::uint32_t payload) {
  if (phrase.empty()) return;
  std::uint32_t node = 0;
  for (const auto& token : phrase) {
    auto it = nodes_[node].next.find(token);
    if (it == nodes_[node].next.end()) {
      auto child = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].next.emplace(token, child);
      nodes_.emplace_back();
      node = child;
    } else {
      node = it->second;
    }
  }
  auto& slot = nodes_[node].payload;
  if (!slot) {
    slot = payload;
    ++phrase_count_;
  } else {
    slot = std::min(*slot, payload);
  }
  max_length_ = std::max(max_length_, phrase.size());
}

std::optional<PhraseMatcher::Match> PhraseMatcher::longest_at(
    std::span<const Token> tokens, std::size_t pos) const {
  std::optional<Match> best;
  std::uint32_t node = 0;
  for (std::size_t i = pos; i < tokens.size(); ++i) {
    auto it = nodes_[node].next.find(tokens[i].norm);
    if (it == nodes_[node].next.end()) break;
    node = it->second;
    if (nodes_[node].payload) best = Match{pos, i + 1, *nodes_[node].payload};
  }
  return best;
}

std::vector<PhraseMatcher::Match> PhraseMatcher::find_all(
    std::span<const Token> tokens) const {
  std::vector<Match> matches;
  if (empty()) return matches;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    if (auto m = longest_at(tokens, pos)) {
      matches.push_back(*m);
      pos = m->end;
    } else {
      ++pos;
    }
  }
  return matches;
}

}  // namespace evgen
