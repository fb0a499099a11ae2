// evgen command-line tool: build an index, run evidence queries, evaluate
// against a golden file, or serve queries over HTTP.
//
// Exit codes: 0 success, 1 usage error (bad flags or query), 2 data or
// resource error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "evgen/config.hpp"
#include "evgen/corpus.hpp"
#include "evgen/engine.hpp"
#include "evgen/eval.hpp"
#include "evgen/http_service.hpp"
#include "evgen/retrieval.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct EngineFlags {
  std::string config;
  std::string index;
  std::optional<std::size_t> k;
  std::optional<double> tau;
  std::optional<std::size_t> budget;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "Engine config file (key = value)");
    app.add_option("--index", index, "Index file; overrides the config");
    app.add_option("--k", k, "Result depth; overrides the config")
        ->check(CLI::PositiveNumber);
    app.add_option("--tau", tau, "Similarity threshold; overrides the config");
    app.add_option("--budget", budget, "Summary token budget; overrides the config");
  }

  evgen::EngineConfig resolve() const {
    evgen::EngineConfig cfg;
    if (!config.empty()) cfg = evgen::load_engine_config(config);
    if (!index.empty()) cfg.index = index;
    if (k) cfg.k = *k;
    if (tau) cfg.skeleton.tau = *tau;
    if (budget) cfg.summary.budget = *budget;
    return cfg;
  }
};

int cmd_index(const std::string& corpus_path, const std::string& out, bool lenient) {
  std::ifstream in(corpus_path);
  if (!in) throw evgen::Error("cannot open corpus " + corpus_path);
  auto parsed = evgen::parse_corpus(
      in, lenient ? evgen::ParseMode::kLenient : evgen::ParseMode::kStrict);
  for (const auto& issue : parsed.skipped)
    std::cerr << "skipped line " << issue.line << ": " << evgen::to_string(issue.kind)
              << " (" << issue.detail << ")\n";
  auto index = evgen::InvertedIndex::build(parsed.documents);
  index.save(out);
  std::cerr << "indexed " << index.doc_count() << " documents, " << index.term_count()
            << " terms -> " << out << "\n";
  return 0;
}

void print_text(const evgen::EvidenceSet& set) {
  std::cout << "query: " << set.raw_query << "\n";
  for (const auto& group : set.expanded.groups) {
    std::cout << "  " << group.source.surface << " ("
              << evgen::to_string(group.source.type) << "):";
    for (const auto& form : group.forms) std::cout << " [" << evgen::join(form) << "]";
    std::cout << "\n";
  }
  if (set.results.empty()) std::cout << "no matching documents\n";
  for (const auto& r : set.results) {
    std::cout << "\n#" << r.hit.rank << " " << r.hit.doc_id << "  score "
              << r.hit.score << "\n  skeleton:";
    for (std::size_t i = 0; i < r.skeleton.spans.size(); ++i)
      std::cout << " " << r.span_texts[i] << "/"
                << evgen::to_string(r.skeleton.spans[i].label);
    std::cout << "\n";
    if (const auto* ev = std::get_if<evgen::Evidence>(&r.evidence)) {
      std::cout << "  evidence: " << ev->text() << "\n";
    } else {
      const auto& none = std::get<evgen::NoEvidence>(r.evidence);
      std::cout << "  no evidence ("
                << (none.reason == evgen::NoEvidence::Reason::kUnresponsive
                        ? "unresponsive"
                        : "empty selection")
                << ")\n";
    }
  }
}

int cmd_query(const EngineFlags& flags, const std::string& query, bool json) {
  auto engine = evgen::Engine::open(flags.resolve());
  auto set = engine.run(query);
  if (json)
    std::cout << evgen::to_json(set, 2) << "\n";
  else
    print_text(set);
  return 0;
}

int cmd_eval(const EngineFlags& flags, const std::string& golden_path) {
  auto golden = evgen::load_golden(golden_path);
  auto engine = evgen::Engine::open(flags.resolve());
  std::vector<evgen::EvidenceSet> outputs;
  for (const auto& entry : golden) outputs.push_back(engine.run(entry.query));
  std::cout << evgen::to_json(evgen::evaluate(outputs, golden), 2) << "\n";
  return 0;
}

int cmd_serve(const EngineFlags& flags, const std::string& addr) {
  std::string host;
  std::uint16_t port = 0;
  try {
    std::tie(host, port) = evgen::parse_address(addr);
  } catch (const evgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  auto engine = evgen::Engine::open(flags.resolve());

  // Route SIGINT/SIGTERM to a waiter thread so stop() runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  evgen::EvidenceServer server(engine);
  const auto bound = server.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  std::thread([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  }).detach();
  server.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity-query evidence retrieval and summarization"};
  app.require_subcommand(1);

  std::string corpus, out;
  bool lenient = false;
  auto* index_cmd = app.add_subcommand("index", "Build an index from a JSONL corpus");
  index_cmd->add_option("--corpus", corpus, "Corpus JSONL")->required();
  index_cmd->add_option("--out", out, "Output index file")->required();
  index_cmd->add_flag("--lenient", lenient, "Skip bad corpus lines instead of failing");

  EngineFlags query_flags;
  std::string query_text;
  bool json = false;
  auto* query_cmd = app.add_subcommand("query", "Retrieve and summarize evidence");
  query_flags.attach(*query_cmd);
  query_cmd->add_option("entities", query_text, "e.g. \"diabetes, drug:metformin\"")
      ->required();
  query_cmd->add_flag("--json", json, "Print the full result as JSON");

  EngineFlags evidence_flags;
  std::string evidence_text;
  auto* evidence_cmd =
      app.add_subcommand("evidence", "Same as `query --json`");
  evidence_flags.attach(*evidence_cmd);
  evidence_cmd->add_option("entities", evidence_text, "Entity query")->required();

  EngineFlags eval_flags;
  std::string golden;
  auto* eval_cmd = app.add_subcommand("eval", "Score the engine against a golden file");
  eval_flags.attach(*eval_cmd);
  eval_cmd->add_option("--golden", golden, "Golden JSONL")->required();

  EngineFlags serve_flags;
  std::string addr = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Serve queries over HTTP");
  serve_flags.attach(*serve_cmd);
  serve_cmd->add_option("--addr", addr, "host:port to listen on");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (index_cmd->parsed()) return cmd_index(corpus, out, lenient);
    if (query_cmd->parsed()) return cmd_query(query_flags, query_text, json);
    if (evidence_cmd->parsed()) return cmd_query(evidence_flags, evidence_text, true);
    if (eval_cmd->parsed()) return cmd_eval(eval_flags, golden);
    if (serve_cmd->parsed()) return cmd_serve(serve_flags, addr);
  } catch (const evgen::QueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
