#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "evgen/error.hpp"
#include "evgen/retrieval.hpp"
#include "evgen/skeleton.hpp"
#include "evgen/summarize.hpp"

namespace evgen {

class ConfigError : public LineError {
 public:
  using LineError::LineError;
};

struct EngineConfig {
  std::filesystem::path index;
  std::filesystem::path synonyms;
  std::filesystem::path triggers;
  std::filesystem::path embeddings;
  std::filesystem::path stopwords;

  Bm25Params bm25;
  SkeletonConfig skeleton;
  SummaryConfig summary;
  std::size_t k = 10;

  // Recognized keys: index, synonyms, triggers, embeddings, stopwords, k,
  // bm25.k1, bm25.b, skeleton.tau, skeleton.max_similar_per_sentence,
  // summary.budget, summary.compression. Relative paths resolve against
  // `base_dir`. Throws ConfigError on an unknown key or bad value.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir = {});

  // Throws ConfigError when a numeric setting is out of range or a named
  // resource file does not exist.
  void validate() const;
};

// `key = value` lines; '#' starts a comment; values may be double-quoted.
EngineConfig read_engine_config(std::istream& in,
                                const std::filesystem::path& base_dir = {});
EngineConfig load_engine_config(const std::filesystem::path& path);

}  // namespace evgen
