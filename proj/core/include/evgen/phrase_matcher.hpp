#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evgen/corpus.hpp"
#include "evgen/kb.hpp"

namespace evgen {

// Token-level trie over lowercase phrases. Each phrase carries a payload;
// when a phrase is added twice the smaller payload is kept.
class PhraseMatcher {
 public:
  struct Match {
    std::size_t begin = 0;  // token offsets into the searched span
    std::size_t end = 0;
    std::uint32_t payload = 0;

    bool operator==(const Match&) const = default;
  };

  PhraseMatcher();

  void add(const TokenSeq& phrase, std::uint32_t payload);

  bool empty() const { return phrase_count_ == 0; }
  std::size_t max_length() const { return max_length_; }

  // Longest phrase starting at tokens[pos].
  std::optional<Match> longest_at(std::span<const Token> tokens,
                                  std::size_t pos) const;

  // Scans left to right, taking the longest phrase at each position and
  // resuming after it.
  std::vector<Match> find_all(std::span<const Token> tokens) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct Node {
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> next;
    std::optional<std::uint32_t> payload;
  };

  std::vector<Node> nodes_;
  std::size_t max_length_ = 0;
  std::size_t phrase_count_ = 0;
};

}  // namespace evgen
