#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "evgen/config.hpp"
#include "evgen/corpus.hpp"
#include "evgen/engine.hpp"
#include "evgen/retrieval.hpp"

namespace evgen::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(EVGEN_DATA_DIR) / name;
}

// Removed with its contents on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("evgen-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<Document> mini_corpus() {
  std::ifstream in(data_path("corpus.jsonl"));
  return parse_corpus(in).documents;
}

// The shipped engine.cfg with its index pointed at a freshly built copy of
// the mini corpus inside `dir`.
inline EngineConfig mini_config(const TempDir& dir) {
  auto docs = mini_corpus();
  auto index_path = dir / "mini.idx";
  InvertedIndex::build(docs).save(index_path);
  EngineConfig cfg = load_engine_config(data_path("engine.cfg"));
  cfg.index = index_path;
  return cfg;
}

}  // namespace evgen::testing
