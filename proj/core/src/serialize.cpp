#include "evgen/engine.hpp"
#include "json.hpp"

namespace evgen {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json group_json(const std::optional<std::size_t>& group) {
  return group ? ordered_json(*group) : ordered_json(nullptr);
}

ordered_json evidence_json(const EvidenceOutcome& outcome) {
  const auto* evidence = std::get_if<Evidence>(&outcome);
  if (evidence == nullptr) return nullptr;
  ordered_json sentences = ordered_json::array();
  for (const auto& s : evidence->sentences) {
    ordered_json entry;
    entry["index"] = s.index;
    entry["text"] = s.text;
    sentences.push_back(std::move(entry));
  }
  ordered_json items = ordered_json::array();
  for (const auto& item : evidence->covered_items) {
    ordered_json entry;
    entry["label"] = to_string(item.label);
    entry["text"] = item.text;
    entry["group"] = group_json(item.group);
    items.push_back(std::move(entry));
  }
  ordered_json out;
  out["sentences"] = std::move(sentences);
  out["covered_items"] = std::move(items);
  return out;
}

}  // namespace

std::string to_json(const EvidenceSet& set, int indent) {
  ordered_json root;
  root["query"] = set.raw_query;

  ordered_json expanded = ordered_json::array();
  for (const auto& group : set.expanded.groups) {
    ordered_json entry;
    entry["entity"] = group.source.surface;
    entry["type"] = to_string(group.source.type);
    ordered_json forms = ordered_json::array();
    for (const auto& form : group.forms) forms.push_back(join(form));
    entry["forms"] = std::move(forms);
    expanded.push_back(std::move(entry));
  }
  root["expanded_query"] = std::move(expanded);

  ordered_json results = ordered_json::array();
  for (const auto& r : set.results) {
    ordered_json entry;
    entry["doc_id"] = r.hit.doc_id;
    entry["score"] = r.hit.score;
    entry["rank"] = r.hit.rank;
    ordered_json skeleton = ordered_json::array();
    for (std::size_t i = 0; i < r.skeleton.spans.size(); ++i) {
      const auto& span = r.skeleton.spans[i];
      ordered_json s;
      s["sentence"] = span.sentence;
      s["start"] = span.token_begin;
      s["end"] = span.token_end;
      s["label"] = to_string(span.label);
      s["score"] = span.score;
      s["text"] = i < r.span_texts.size() ? r.span_texts[i] : std::string();
      skeleton.push_back(std::move(s));
    }
    entry["skeleton"] = std::move(skeleton);
    entry["evidence"] = evidence_json(r.evidence);
    results.push_back(std::move(entry));
  }
  root["results"] = std::move(results);
  return root.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace evgen
