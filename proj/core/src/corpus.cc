#include "claimeval/corpus.h"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Calls `fn(record, line_number)` for each non-blank line parsed as a JSON object.
template <typename Fn>
void for_each_record(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!record.is_object()) throw ParseError(source, line_no, "expected a JSON object");
    try {
      fn(record, line_no);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

std::string required_string(const json& record, const char* key, const std::string& source,
                            std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(source, line, fmt::format("missing key '{}'", key));
  if (!it->is_string()) throw ParseError(source, line, fmt::format("key '{}' must be a string", key));
  return it->get<std::string>();
}

std::string optional_string(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return {};
  return it->get<std::string>();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

std::string document_text(const Document& document) {
  std::string out;
  for (std::string_view part : {std::string_view(document.page_title),
                                std::string_view(document.context_before),
                                std::string_view(document.source_sentence),
                                std::string_view(document.context_after)}) {
    part = text::trim(part);
    if (part.empty()) continue;
    if (!out.empty()) out += ' ';
    out += part;
  }
  return out;
}

const Document* Corpus::find_document(std::string_view doc_id) const {
  for (const auto& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

const ClaimSet* Corpus::find_set(std::string_view doc_id, std::string_view origin) const {
  for (const auto& s : claim_sets) {
    if (s.doc_id == doc_id && s.origin == origin) return &s;
  }
  return nullptr;
}

std::vector<const ClaimSet*> Corpus::gold_sets() const {
  std::vector<const ClaimSet*> out;
  for (const auto& s : claim_sets) {
    if (s.is_gold()) out.push_back(&s);
  }
  return out;
}

std::vector<const ClaimSet*> Corpus::predicted_sets() const {
  std::vector<const ClaimSet*> out;
  for (const auto& s : claim_sets) {
    if (!s.is_gold()) out.push_back(&s);
  }
  return out;
}

std::vector<std::string> Corpus::predicted_origins() const {
  std::vector<std::string> out;
  std::set<std::string_view> seen;
  for (const auto& s : claim_sets) {
    if (s.is_gold()) continue;
    if (seen.insert(s.origin).second) out.push_back(s.origin);
  }
  return out;
}

const Claim* Corpus::find_claim(std::string_view claim_id) const {
  for (const auto& s : claim_sets) {
    for (const auto& c : s.claims) {
      if (c.claim_id == claim_id) return &c;
    }
  }
  return nullptr;
}

std::size_t Corpus::claim_count() const {
  std::size_t n = 0;
  for (const auto& s : claim_sets) n += s.size();
  return n;
}

std::vector<Document> read_documents(std::istream& in, const std::string& source) {
  std::vector<Document> out;
  for_each_record(in, source, [&](const json& r, std::size_t line) {
    Document d;
    d.doc_id = required_string(r, "doc_id", source, line);
    d.page_title = optional_string(r, "page_title");
    d.context_before = optional_string(r, "context_before");
    d.source_sentence = required_string(r, "source_sentence", source, line);
    d.context_after = optional_string(r, "context_after");
    if (text::trim(d.doc_id).empty()) throw ParseError(source, line, "empty doc_id");
    if (text::trim(d.source_sentence).empty()) {
      throw ParseError(source, line, fmt::format("document '{}' has an empty source_sentence", d.doc_id));
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::vector<Claim> read_claims(std::istream& in, const std::string& source) {
  std::vector<Claim> out;
  for_each_record(in, source, [&](const json& r, std::size_t line) {
    Claim c;
    c.claim_id = required_string(r, "claim_id", source, line);
    c.doc_id = required_string(r, "doc_id", source, line);
    c.origin = required_string(r, "origin", source, line);
    c.text = required_string(r, "text", source, line);
    if (text::trim(c.text).empty()) {
      throw ParseError(source, line, fmt::format("claim '{}' has empty text", c.claim_id));
    }
    if (text::trim(c.origin).empty()) throw ParseError(source, line, "empty origin");
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<AnnotationRecord> read_annotations(std::istream& in, const std::string& source) {
  std::vector<AnnotationRecord> out;
  for_each_record(in, source, [&](const json& r, std::size_t line) {
    AnnotationRecord a;
    a.claim_id = required_string(r, "claim_id", source, line);
    a.annotator_id = required_string(r, "annotator_id", source, line);
    try {
      a.metric = metric_from_string(required_string(r, "metric", source, line));
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(source, line, e.what());
    }
    auto v = r.find("value");
    if (v == r.end() || !v->is_number_integer()) {
      throw ParseError(source, line, "key 'value' must be an integer grade");
    }
    a.value = v->get<int>();
    a.origin = optional_string(r, "origin");
    out.push_back(std::move(a));
  });
  return out;
}

std::vector<ClaimSet> group_claims(std::vector<Claim> claims) {
  std::vector<ClaimSet> sets;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (auto& c : claims) {
    auto key = std::make_pair(c.doc_id, c.origin);
    auto [it, inserted] = index.emplace(key, sets.size());
    if (inserted) sets.push_back(ClaimSet{c.doc_id, c.origin, {}});
    sets[it->second].claims.push_back(std::move(c));
  }
  return sets;
}

void validate_corpus(const Corpus& corpus) {
  std::set<std::string_view> doc_ids;
  std::vector<std::string> duplicate_docs;
  for (const auto& d : corpus.documents) {
    if (!doc_ids.insert(d.doc_id).second) duplicate_docs.push_back(d.doc_id);
  }
  if (!duplicate_docs.empty()) throw IntegrityError("duplicate doc_id", duplicate_docs);

  std::set<std::string_view> claim_ids;
  std::vector<std::string> duplicate_claims;
  std::vector<std::string> dangling;
  std::set<std::string_view> dangling_seen;
  for (const auto& s : corpus.claim_sets) {
    if (s.is_gold() && s.empty()) {
      throw IntegrityError("empty gold claim set", {s.doc_id});
    }
    for (const auto& c : s.claims) {
      if (c.doc_id != s.doc_id || c.origin != s.origin) {
        throw IntegrityError("claim grouped under the wrong set", {c.claim_id});
      }
      if (!claim_ids.insert(c.claim_id).second) duplicate_claims.push_back(c.claim_id);
      if (!doc_ids.contains(c.doc_id) && dangling_seen.insert(c.doc_id).second) {
        dangling.push_back(c.doc_id);
      }
    }
  }
  if (!duplicate_claims.empty()) throw IntegrityError("duplicate claim_id", duplicate_claims);
  if (!dangling.empty()) throw IntegrityError("claims reference unknown doc_id", dangling);
}

Corpus load_corpus(const std::filesystem::path& documents_path,
                   const std::filesystem::path& claims_path) {
  return load_corpus(documents_path, std::span<const std::filesystem::path>(&claims_path, 1));
}

Corpus load_corpus(const std::filesystem::path& documents_path,
                   std::span<const std::filesystem::path> claims_paths) {
  Corpus corpus;
  {
    auto in = open_input(documents_path);
    corpus.documents = read_documents(in, documents_path.string());
  }
  std::vector<Claim> claims;
  for (const auto& path : claims_paths) {
    auto in = open_input(path);
    auto part = read_claims(in, path.string());
    claims.insert(claims.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  corpus.claim_sets = group_claims(std::move(claims));
  validate_corpus(corpus);
  return corpus;
}

std::vector<AnnotationRecord> validate_annotations(std::vector<AnnotationRecord> records,
                                                   const Corpus* corpus) {
  std::set<std::tuple<std::string, std::string, Metric, std::string>> keys;
  std::vector<std::string> unknown;
  std::set<std::string_view> claim_ids;
  if (corpus != nullptr) {
    for (const auto& s : corpus->claim_sets) {
      for (const auto& c : s.claims) claim_ids.insert(c.claim_id);
    }
  }
  for (const auto& r : records) {
    int top = metric_scale_top(r.metric);
    if (r.value < 0 || r.value > top) {
      throw DataError(fmt::format(
          "annotation of claim '{}' by '{}': {} grade {} out of range (legal: {{{}}})", r.claim_id,
          r.annotator_id, to_string(r.metric), r.value, top == 3 ? "0,1,2,3" : "0,1"));
    }
    if (r.metric == Metric::kCoverageCheck && r.origin.empty()) {
      throw DataError(fmt::format(
          "coverage_check annotation of claim '{}' by '{}' must name the evaluated origin",
          r.claim_id, r.annotator_id));
    }
    if (!keys.emplace(r.claim_id, r.annotator_id, r.metric, r.origin).second) {
      throw DataError(fmt::format("duplicate annotation: claim '{}', annotator '{}', metric {}",
                                  r.claim_id, r.annotator_id, to_string(r.metric)));
    }
    if (corpus != nullptr && !claim_ids.contains(r.claim_id)) {
      unknown.push_back(r.claim_id);
    }
  }
  if (!unknown.empty()) throw IntegrityError("annotations reference unknown claim_id", unknown);
  return records;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path,
                                               const Corpus* corpus) {
  auto in = open_input(path);
  return validate_annotations(read_annotations(in, path.string()), corpus);
}

void write_documents(std::ostream& out, std::span<const Document> documents) {
  for (const auto& d : documents) {
    ordered_json r;
    r["doc_id"] = d.doc_id;
    r["page_title"] = d.page_title;
    r["context_before"] = d.context_before;
    r["source_sentence"] = d.source_sentence;
    r["context_after"] = d.context_after;
    out << r.dump() << '\n';
  }
}

void write_claims(std::ostream& out, std::span<const ClaimSet> sets) {
  for (const auto& s : sets) {
    for (const auto& c : s.claims) {
      ordered_json r;
      r["claim_id"] = c.claim_id;
      r["doc_id"] = c.doc_id;
      r["origin"] = c.origin;
      r["text"] = c.text;
      out << r.dump() << '\n';
    }
  }
}

void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records) {
  for (const auto& a : records) {
    ordered_json r;
    r["claim_id"] = a.claim_id;
    r["annotator_id"] = a.annotator_id;
    r["metric"] = to_string(a.metric);
    r["value"] = a.value;
    if (!a.origin.empty()) r["origin"] = a.origin;
    out << r.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& documents_path,
                  const std::filesystem::path& claims_path) {
  auto docs = open_output(documents_path);
  write_documents(docs, corpus.documents);
  auto claims = open_output(claims_path);
  write_claims(claims, corpus.claim_sets);
}

}  // namespace claimeval
