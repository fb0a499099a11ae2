#include "evgen/eval.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "json.hpp"
#include "text.hpp"

namespace evgen {
namespace {

[[noreturn]] void golden_error(std::size_t line, const std::string& why) {
  throw EvalError(EvalError::Kind::kGoldenFormat, line,
                  "GoldenFormat at line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> string_array(const nlohmann::json& object,
                                      const char* field, std::size_t line) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_array())
    golden_error(line, std::string("'") + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string())
      golden_error(line, std::string("'") + field + "' must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string string_field(const nlohmann::json& object, const char* field,
                         std::size_t line) {
  auto it = object.find(field);
  if (it == object.end() || !it->is_string())
    golden_error(line, std::string("'") + field + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<GoldenEntry> read_golden(std::istream& in) {
  std::vector<GoldenEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto object = nlohmann::json::parse(line, nullptr, false);
    if (object.is_discarded() || !object.is_object())
      golden_error(line_no, "not a JSON object");
    GoldenEntry entry;
    entry.query = string_field(object, "query", line_no);
    entry.relevant_doc_ids = string_array(object, "relevant_doc_ids", line_no);
    entry.skeleton_items = string_array(object, "skeleton_items", line_no);
    entry.reference_summary = string_field(object, "reference_summary", line_no);
    try {
      parse_query(entry.query);
    } catch (const QueryError& e) {
      golden_error(line_no, e.what());
    }
    if (token_norms(entry.reference_summary).empty())
      golden_error(line_no, "reference_summary has no tokens");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<GoldenEntry> load_golden(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw EvalError(EvalError::Kind::kGoldenFormat, 0,
                    "cannot open golden file " + path.string());
  return read_golden(in);
}

double rouge1_recall(std::string_view candidate, std::string_view reference) {
  auto ref = token_norms(nfc_normalize(reference));
  if (ref.empty())
    throw EvalError(EvalError::Kind::kEmptyReference, 0,
                    "EmptyReference: reference has no tokens");
  std::map<std::string, std::size_t> available;
  for (auto& t : token_norms(nfc_normalize(candidate))) ++available[t];
  std::size_t matched = 0;
  for (const auto& t : ref) {
    auto it = available.find(t);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return static_cast<double>(matched) / static_cast<double>(ref.size());
}

namespace {

double precision(const EvidenceSet& out, const GoldenEntry& gold) {
  std::set<std::string> relevant(gold.relevant_doc_ids.begin(),
                                 gold.relevant_doc_ids.end());
  if (out.results.empty()) return relevant.empty() ? 1.0 : 0.0;
  std::size_t hits = 0;
  for (const auto& r : out.results) hits += relevant.count(r.hit.doc_id);
  return static_cast<double>(hits) / static_cast<double>(out.results.size());
}

double f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  if (predicted.empty() && gold.empty()) return 1.0;
  std::size_t tp = 0;
  for (const auto& p : predicted) tp += gold.count(p);
  if (tp == 0) return 0.0;
  const double p = static_cast<double>(tp) / static_cast<double>(predicted.size());
  const double r = static_cast<double>(tp) / static_cast<double>(gold.size());
  return 2 * p * r / (p + r);
}

QueryScores score(const EvidenceSet& out, const GoldenEntry& gold) {
  QueryScores s;
  s.query = gold.query;
  s.precision_at_k = precision(out, gold);

  std::set<std::string> predicted;
  std::string candidate;
  for (const auto& r : out.results) {
    predicted.insert(r.span_texts.begin(), r.span_texts.end());
    if (const auto* ev = std::get_if<Evidence>(&r.evidence)) {
      if (!candidate.empty()) candidate.push_back(' ');
      candidate += ev->text();
    }
  }
  std::set<std::string> gold_items;
  for (const auto& item : gold.skeleton_items) {
    auto norm = join(to_token_seq(item));
    if (!norm.empty()) gold_items.insert(std::move(norm));
  }
  s.skeleton_f1 = f1(predicted, gold_items);
  s.rouge1_recall = rouge1_recall(candidate, gold.reference_summary);
  return s;
}

}  // namespace

EvalReport evaluate(std::span<const EvidenceSet> outputs,
                    std::span<const GoldenEntry> golden) {
  EvalReport report;
  for (const auto& gold : golden) {
    const Query wanted = parse_query(gold.query);
    const EvidenceSet* match = nullptr;
    for (const auto& out : outputs) {
      if (out.query == wanted) {
        match = &out;
        break;
      }
    }
    QueryScores s;
    s.query = gold.query;
    if (match != nullptr) s = score(*match, gold);
    report.queries.push_back(std::move(s));
  }
  if (!report.queries.empty()) {
    const double n = static_cast<double>(report.queries.size());
    for (const auto& q : report.queries) {
      report.macro.precision_at_k += q.precision_at_k;
      report.macro.skeleton_f1 += q.skeleton_f1;
      report.macro.rouge1_recall += q.rouge1_recall;
    }
    report.macro.precision_at_k /= n;
    report.macro.skeleton_f1 /= n;
    report.macro.rouge1_recall /= n;
  }
  return report;
}

std::string to_json(const EvalReport& report, int indent) {
  nlohmann::ordered_json root;
  auto scores = [](const QueryScores& s) {
    nlohmann::ordered_json o;
    o["precision_at_k"] = s.precision_at_k;
    o["skeleton_f1"] = s.skeleton_f1;
    o["rouge1_recall"] = s.rouge1_recall;
    return o;
  };
  auto queries = nlohmann::ordered_json::array();
  for (const auto& q : report.queries) {
    nlohmann::ordered_json o;
    o["query"] = q.query;
    o.update(scores(q));
    queries.push_back(std::move(o));
  }
  root["queries"] = std::move(queries);
  root["macro"] = scores(report.macro);
  return root.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace evgen
