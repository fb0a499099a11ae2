#include "evgen/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "text.hpp"

namespace evgen {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("invalid value for '" + std::string(key) + "': '" +
                          std::string(value) + "'",
                      0);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" +
                        std::string(value) + "'",
                    0);
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

void EngineConfig::set(std::string_view key, std::string_view value,
                       const std::filesystem::path& base_dir) {
  if (key == "index") index = resolve(base_dir, value);
  else if (key == "synonyms") synonyms = resolve(base_dir, value);
  else if (key == "triggers") triggers = resolve(base_dir, value);
  else if (key == "embeddings") embeddings = resolve(base_dir, value);
  else if (key == "stopwords") stopwords = resolve(base_dir, value);
  else if (key == "k") k = parse_number<std::size_t>(key, value);
  else if (key == "bm25.k1") bm25.k1 = parse_number<double>(key, value);
  else if (key == "bm25.b") bm25.b = parse_number<double>(key, value);
  else if (key == "skeleton.tau") skeleton.tau = parse_number<double>(key, value);
  else if (key == "skeleton.max_similar_per_sentence")
    skeleton.max_similar_per_sentence = parse_number<std::size_t>(key, value);
  else if (key == "summary.budget") summary.budget = parse_number<std::size_t>(key, value);
  else if (key == "summary.compression") summary.compression = parse_bool(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'", 0);
}

void EngineConfig::validate() const {
  if (k == 0) throw ConfigError("k must be >= 1", 0);
  try {
    bm25.validate();
    skeleton.validate();
    summary.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
  for (const auto* path : {&index, &synonyms, &triggers, &embeddings, &stopwords})
    if (!path->empty() && !std::filesystem::exists(*path))
      throw ConfigError("missing resource file " + path->string(), 0);
}

EngineConfig read_engine_config(std::istream& in,
                                const std::filesystem::path& base_dir) {
  EngineConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = text::trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected key = value at line " + std::to_string(line_no),
                        line_no);
    auto key = text::trim(view.substr(0, eq));
    auto value = text::trim(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    try {
      config.set(key, value, base_dir);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")",
                        line_no);
    }
  }
  return config;
}

EngineConfig load_engine_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string(), 0);
  return read_engine_config(in, path.parent_path());
}

}  // namespace evgen
