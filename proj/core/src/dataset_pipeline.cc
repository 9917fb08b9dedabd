#include "claimeval/dataset_pipeline.h"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "claimeval/errors.h"
#include "claimeval/text.h"
#include "parallel.h"

namespace claimeval {
namespace {

using json = nlohmann::json;

std::string render_premise(const std::string& tmpl, std::string_view title, std::string_view sentence) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, 10, "{sentence}") == 0) {
      out += sentence;
      i += 10;
    } else if (tmpl.compare(i, 7, "{title}") == 0) {
      out += title;
      i += 7;
    } else {
      out += tmpl[i++];
    }
  }
  return std::string(text::trim(out));
}

std::set<std::string> entity_words(const std::vector<std::string>& entities) {
  std::set<std::string> out;
  for (const auto& e : entities) {
    for (auto& w : text::word_tokens(e)) out.insert(std::move(w));
  }
  return out;
}

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      fn(json::parse(line), line_no);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

}  // namespace

std::optional<std::string> select_article(const ClaimGroup& group) {
  if (group.evidence_articles.empty()) return std::nullopt;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : group.evidence_articles) ++counts[t];
  // Ascending iteration plus strict '>' keeps the smallest title on ties.
  const std::string* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [title, count] : counts) {
    if (count > best_count) {
      best = &title;
      best_count = count;
    }
  }
  return *best;
}

std::optional<std::size_t> locate_source_sentence(const ClaimGroup& group,
                                                  const ArticleSentences& article,
                                                  const EntailmentScorer& nli,
                                                  const LocateOptions& options) {
  if (article.sentences.empty()) {
    throw DataError(fmt::format("article '{}' has no sentences", article.title));
  }
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) {
    throw ConfigError(fmt::format("entailment threshold {} must lie in (0, 1)", options.threshold));
  }
  std::optional<std::size_t> best;
  std::size_t best_count = 0;
  double best_mean = -1.0;
  try {
    for (std::size_t s = 0; s < article.sentences.size(); ++s) {
      auto premise = render_premise(options.premise_template, article.title, article.sentences[s]);
      std::size_t count = 0;
      double sum = 0.0;
      for (const auto& claim : group.claims) {
        double p = nli.probability(premise, claim);
        sum += p;
        if (p >= options.threshold) ++count;
      }
      double mean = group.claims.empty() ? 0.0 : sum / static_cast<double>(group.claims.size());
      if (count > best_count || (count == best_count && count > 0 && mean > best_mean)) {
        best = s;
        best_count = count;
        best_mean = mean;
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(fmt::format("group '{}': {}", group.group_id, e.what()));
  }
  return best_count == 0 ? std::nullopt : best;
}

Document build_document(const ArticleSentences& article, std::size_t index, std::string doc_id) {
  if (index >= article.sentences.size()) {
    throw DataError(fmt::format("sentence index {} out of range for article '{}' ({} sentences)", index,
                                article.title, article.sentences.size()));
  }
  Document d;
  d.doc_id = std::move(doc_id);
  d.page_title = article.title;
  d.source_sentence = article.sentences[index];
  if (index > 0) d.context_before = article.sentences[index - 1];
  if (index + 1 < article.sentences.size()) d.context_after = article.sentences[index + 1];
  return d;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "unknown";
}

CorpusSplit split_corpus(std::span<const Document> documents, SplitRatios ratios, std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.dev, ratios.test};
  for (double x : r) {
    if (!(x > 0.0)) throw ConfigError("split ratios must be positive");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");

  std::map<std::string, std::vector<std::size_t>> by_title;
  for (std::size_t i = 0; i < documents.size(); ++i) by_title[documents[i].page_title].push_back(i);
  if (by_title.size() < 3) {
    throw DataError(fmt::format("{} distinct page titles cannot fill 3 splits", by_title.size()));
  }

  std::vector<const std::vector<std::size_t>*> groups;
  for (const auto& [title, idx] : by_title) groups.push_back(&idx);
  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto* a, const auto* b) { return a->size() > b->size(); });

  CorpusSplit out;
  const double n = static_cast<double>(documents.size());
  for (int s = 0; s < 3; ++s) out.targets[s] = r[s] * n;
  std::array<double, 3> counts{0.0, 0.0, 0.0};
  for (const auto* group : groups) {
    int pick = 0;
    for (int s = 1; s < 3; ++s) {
      if (out.targets[s] - counts[s] > out.targets[pick] - counts[pick]) pick = s;
    }
    counts[pick] += static_cast<double>(group->size());
    for (auto i : *group) out.assignment[documents[i].doc_id] = static_cast<Split>(pick);
  }
  // Keep input order inside each split.
  for (const auto& d : documents) {
    out.documents[static_cast<int>(out.assignment.at(d.doc_id))].push_back(d);
  }
  return out;
}

double entity_word_recall(const Document& source, const ClaimSet& claims, const EntityRecognizer& ner) {
  if (claims.empty()) throw DataError(fmt::format("document '{}': no claims to probe", source.doc_id));
  auto src = entity_words(ner.entities(source.source_sentence));
  if (src.empty()) return 1.0;
  std::set<std::string> covered;
  for (const auto& c : claims.claims) {
    auto words = entity_words(ner.entities(c.text));
    covered.insert(words.begin(), words.end());
  }
  std::size_t hit = 0;
  for (const auto& w : src) hit += covered.contains(w) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(src.size());
}

std::vector<ClaimGroup> read_claim_groups(std::istream& in, const std::string& source) {
  std::vector<ClaimGroup> groups;
  std::map<std::string, std::size_t> index;
  for_each_json_line(in, source, [&](const json& r, std::size_t line) {
    auto gid = r.at("group_id");
    std::string group_id = gid.is_string() ? gid.get<std::string>() : gid.dump();
    auto claim_text = r.at("text").get<std::string>();
    if (text::trim(claim_text).empty()) throw ParseError(source, line, "empty claim text");
    auto [it, inserted] = index.emplace(group_id, groups.size());
    if (inserted) groups.push_back(ClaimGroup{group_id, {}, {}, {}});
    auto& g = groups[it->second];
    g.claim_ids.push_back(r.contains("claim_id")
                              ? r.at("claim_id").get<std::string>()
                              : fmt::format("{}-{}", group_id, g.claims.size()));
    g.claims.push_back(std::move(claim_text));
    if (r.contains("evidence_articles")) {
      for (const auto& t : r.at("evidence_articles")) g.evidence_articles.push_back(t.get<std::string>());
    }
  });
  return groups;
}

std::vector<ArticleSentences> read_articles(std::istream& in, const std::string& source) {
  std::vector<ArticleSentences> out;
  for_each_json_line(in, source, [&](const json& r, std::size_t line) {
    ArticleSentences a;
    a.title = r.at("title").get<std::string>();
    a.sentences = r.at("sentences").get<std::vector<std::string>>();
    if (a.sentences.empty()) {
      throw ParseError(source, line, fmt::format("article '{}' has no sentences", a.title));
    }
    out.push_back(std::move(a));
  });
  return out;
}

Reconstruction reconstruct(std::span<const ClaimGroup> groups,
                           std::span<const ArticleSentences> articles, const EntailmentScorer& nli,
                           const ReconstructOptions& options) {
  std::map<std::string_view, const ArticleSentences*> by_title;
  for (const auto& a : articles) by_title.emplace(a.title, &a);

  std::vector<MappingEntry> mapping(groups.size());
  std::vector<std::optional<Document>> docs(groups.size());
  auto work = [&](std::size_t i) {
    const auto& g = groups[i];
    auto& m = mapping[i];
    m.group_id = g.group_id;
    m.status = "tossed";
    auto title = select_article(g);
    if (!title) {
      m.reason = "no_evidence";
      return;
    }
    m.article = *title;
    auto it = by_title.find(*title);
    if (it == by_title.end()) {
      m.reason = "article_missing";
      return;
    }
    auto idx = locate_source_sentence(g, *it->second, nli, options.locate);
    if (!idx) {
      m.reason = "no_entailment";
      return;
    }
    m.status = "mapped";
    m.sentence_index = idx;
    m.doc_id = g.group_id;
    docs[i] = build_document(*it->second, *idx, g.group_id);
  };
  detail::parallel_for(groups.size(), nli.thread_safe() ? options.workers : 1, work);

  Reconstruction out;
  out.mapping = std::move(mapping);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!docs[i]) continue;
    out.documents.push_back(std::move(*docs[i]));
    ClaimSet set{groups[i].group_id, std::string(kGoldOrigin), {}};
    for (std::size_t c = 0; c < groups[i].claims.size(); ++c) {
      set.claims.push_back(Claim{groups[i].claim_ids[c], groups[i].group_id, groups[i].claims[c],
                                 std::string(kGoldOrigin)});
    }
    out.gold.push_back(std::move(set));
  }
  return out;
}

void write_mapping(std::ostream& out, std::span<const MappingEntry> mapping) {
  for (const auto& m : mapping) {
    nlohmann::ordered_json r;
    r["group_id"] = m.group_id;
    r["status"] = m.status;
    if (m.status == "mapped") {
      r["doc_id"] = m.doc_id;
      r["article"] = m.article;
      r["sentence_index"] = *m.sentence_index;
    } else {
      r["reason"] = m.reason;
      if (!m.article.empty()) r["article"] = m.article;
    }
    out << r.dump() << '\n';
  }
}

void write_split(std::ostream& out, const CorpusSplit& split) {
  for (int s = 0; s < 3; ++s) {
    for (const auto& d : split.documents[s]) {
      nlohmann::ordered_json r;
      r["doc_id"] = d.doc_id;
      r["page_title"] = d.page_title;
      r["split"] = to_string(static_cast<Split>(s));
      out << r.dump() << '\n';
    }
  }
}

}  // namespace claimeval
