#include "claimeval/harness.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "claimeval/report_io.h"
#include "claimeval/validation_stats.h"
#include "parallel.h"

namespace claimeval {
namespace {

struct Column {
  std::string_view header;
  std::string_view key;
  bool lower_is_better;
};

constexpr std::array<Column, 8> kLeaderboardColumns{{
    {"Atomicity", "atomicity", false},
    {"Fluency", "fluency", false},
    {"Decontext.", "decontextualization", false},
    {"Faith.", "faithfulness", false},
    {"Focus", "focus", false},
    {"Coverage", "coverage", false},
    {"F_fact", "f_fact", false},
    {"Redundancy", "redundancy", true},
}};

constexpr std::array<std::pair<Metric, std::string_view>, 6> kAgreementColumns{{
    {Metric::kAtomicity, "Atomicity"},
    {Metric::kFluency, "Fluency"},
    {Metric::kDecontextualization, "Decontext."},
    {Metric::kFaithfulness, "Faith."},
    {Metric::kFocusCheck, "Focus"},
    {Metric::kCoverageCheck, "Coverage"},
}};

// One (origin, gold document) unit of work.
struct Task {
  std::string origin;
  const Document* document = nullptr;
  const ClaimSet* gold = nullptr;
  const ClaimSet* predicted = nullptr;  // null: no prediction
};

struct TaskResult {
  bool done = false;
  std::vector<ClaimScores> claims;
  std::optional<SetScores> set;
};

void check_unit_interval(double x, const char* name, bool open) {
  bool ok = open ? (x > 0.0 && x < 1.0) : (x >= 0.0 && x <= 1.0);
  if (!ok) {
    throw ConfigError(fmt::format("threshold {} = {} must lie in {}", name, x, open ? "(0, 1)" : "[0, 1]"));
  }
}

TaskResult run_task(const Task& task, const BackendSet& backends, const RunConfig& config) {
  TaskResult r;
  if (task.predicted == nullptr) {
    r.done = true;
    return r;
  }
  ClaimMetricOptions options{config.scribendi_threshold, config.decontextualization_match};
  if (config.reference_free) {
    for (const auto& c : task.predicted->claims) {
      r.claims.push_back(score_claim(*task.document, c, backends, options));
    }
  }
  if (config.reference_based) {
    try {
      if (config.toss_non_decontextualized) {
        ClaimSet kept{task.predicted->doc_id, task.predicted->origin, {}};
        for (std::size_t i = 0; i < task.predicted->size(); ++i) {
          if (r.claims[i].decontextualization == 1) kept.claims.push_back(task.predicted->claims[i]);
        }
        r.set = score_set(*task.gold, *task.predicted, *backends.alignment, &kept);
      } else {
        r.set = score_set(*task.gold, *task.predicted, *backends.alignment);
      }
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendError(fmt::format("scoring document '{}' for '{}': {}", task.document->doc_id,
                                     task.origin, e.what()));
    }
  }
  r.done = true;
  return r;
}

double mean(double sum, std::size_t n) { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

EvaluationResult assemble(const std::vector<std::string>& origins, const std::vector<Task>& tasks,
                          const std::vector<TaskResult>& results, const RunConfig& config,
                          std::vector<std::string> warnings) {
  EvaluationResult out;
  out.warnings = std::move(warnings);
  for (const auto& origin : origins) {
    std::size_t n_docs = 0;
    std::size_t n_claims = 0;
    std::size_t n_scored_docs = 0;
    // Per-claim sums and per-document-mean sums, in the same metric order.
    std::array<double, 5> claim_sum{};
    std::array<double, 5> doc_mean_sum{};
    double focus_sum = 0.0, coverage_sum = 0.0, f_fact_sum = 0.0, redundancy_sum = 0.0;
    std::size_t redundancy_n = 0;
    std::size_t set_docs = 0;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const auto& t = tasks[i];
      const auto& r = results[i];
      if (t.origin != origin || !r.done) continue;
      ++n_docs;
      if (t.predicted == nullptr) {
        out.no_prediction.emplace_back(t.gold->doc_id, origin);
        if (config.reference_based) ++set_docs;
        continue;
      }
      n_claims += t.predicted->size();
      std::array<double, 5> doc_sum{};
      for (const auto& c : r.claims) {
        out.claim_scores.push_back(ClaimScoreRow{t.document->doc_id, origin, c});
        const std::array<double, 5> v{static_cast<double>(c.atomicity), c.atomicity_soft,
                                      static_cast<double>(c.fluency),
                                      static_cast<double>(c.decontextualization), c.faithfulness};
        for (std::size_t k = 0; k < v.size(); ++k) {
          claim_sum[k] += v[k];
          doc_sum[k] += v[k];
        }
      }
      if (!r.claims.empty()) {
        ++n_scored_docs;
        for (std::size_t k = 0; k < doc_sum.size(); ++k) doc_mean_sum[k] += mean(doc_sum[k], r.claims.size());
      }
      if (r.set) {
        ++set_docs;
        focus_sum += r.set->focus;
        coverage_sum += r.set->coverage;
        f_fact_sum += r.set->f_fact;
        if (r.set->redundancy) {
          redundancy_sum += *r.set->redundancy;
          ++redundancy_n;
        }
        out.set_scores.push_back(*r.set);
      }
    }

    EvaluationReport report;
    report.origin = origin;
    report.n_documents = n_docs;
    report.n_claims = n_claims;
    if (config.reference_free && n_claims > 0) {
      static constexpr std::array<std::string_view, 5> kKeys{
          "atomicity", "atomicity_soft", "fluency", "decontextualization", "faithfulness"};
      for (std::size_t k = 0; k < kKeys.size(); ++k) {
        report.metric_means[std::string(kKeys[k])] =
            config.claim_pooling == ClaimPooling::kPerClaim ? mean(claim_sum[k], n_claims)
                                                            : mean(doc_mean_sum[k], n_scored_docs);
      }
    }
    if (config.reference_based && set_docs > 0) {
      double foc = mean(focus_sum, set_docs);
      double cov = mean(coverage_sum, set_docs);
      report.metric_means["focus"] = foc;
      report.metric_means["coverage"] = cov;
      report.metric_means["f_fact"] = config.f_fact_aggregation == FFactAggregation::kFromMeans
                                          ? f_fact(foc, cov)
                                          : mean(f_fact_sum, set_docs);
      if (redundancy_n > 0) report.metric_means["redundancy"] = mean(redundancy_sum, redundancy_n);
    }
    if (n_claims == 0) out.warnings.push_back(fmt::format("origin '{}' predicted no claims", origin));
    out.reports.push_back(std::move(report));
  }
  for (const auto& [doc, origin] : out.no_prediction) {
    out.warnings.push_back(fmt::format("document '{}': no prediction from '{}'", doc, origin));
  }
  return out;
}

std::string format_value(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : std::string("undef");
}

}  // namespace

void RunConfig::set_threshold(const std::string& name, double value) {
  if (name == "scribendi") scribendi_threshold = value;
  else if (name == "nli") nli_threshold = value;
  else if (name == "faithfulness") faithfulness_rounding = value;
  else throw ConfigError(fmt::format("unknown threshold '{}' (known: scribendi, nli, faithfulness)", name));
}

std::set<Capability> RunConfig::required_capabilities() const {
  std::set<Capability> out;
  if (reference_free) {
    out.insert({Capability::kRelationExtraction, Capability::kGrammarCorrection,
                Capability::kPerplexity, Capability::kDecontextualization, Capability::kAlignment});
  }
  if (reference_based) out.insert(Capability::kAlignment);
  return out;
}

void RunConfig::validate() const {
  check_unit_interval(scribendi_threshold, "scribendi", false);
  check_unit_interval(nli_threshold, "nli", true);
  check_unit_interval(faithfulness_rounding, "faithfulness", false);
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (!reference_free && !reference_based) throw ConfigError("every metric group is disabled");
  if (toss_non_decontextualized && !reference_free) {
    throw ConfigError("tossing non-decontextualized claims needs the reference-free metrics");
  }
}

void RunConfig::validate(const BackendSet& backends) const {
  validate();
  for (auto c : required_capabilities()) {
    if (!backends.has(c)) throw ConfigError(fmt::format("no {} backend bound", to_string(c)));
  }
}

EvaluationResult evaluate(std::span<const Document> documents, std::span<const ClaimSet> gold,
                          std::span<const ClaimSet> predictions, const BackendSet& backends,
                          const RunConfig& config) {
  config.validate(backends);
  std::vector<std::string> warnings;

  std::map<std::string_view, const Document*> docs;
  for (const auto& d : documents) docs.emplace(d.doc_id, &d);
  std::map<std::string_view, const ClaimSet*> gold_by_doc;
  for (const auto& g : gold) {
    if (!docs.contains(g.doc_id)) throw IntegrityError("gold claims reference unknown doc_id", {g.doc_id});
    if (g.empty()) throw IntegrityError("empty gold claim set", {g.doc_id});
    if (!gold_by_doc.emplace(g.doc_id, &g).second) {
      throw IntegrityError("more than one gold set for document", {g.doc_id});
    }
  }

  std::vector<std::string> origins;
  std::map<std::pair<std::string_view, std::string_view>, const ClaimSet*> predicted;
  std::vector<std::string> unmatched;
  for (const auto& p : predictions) {
    if (std::find(origins.begin(), origins.end(), p.origin) == origins.end()) origins.push_back(p.origin);
    if (!gold_by_doc.contains(p.doc_id)) {
      unmatched.push_back(fmt::format("{} ({})", p.doc_id, p.origin));
      continue;
    }
    if (!predicted.emplace(std::make_pair(std::string_view(p.origin), std::string_view(p.doc_id)), &p).second) {
      throw IntegrityError("more than one predicted set for document", {p.doc_id});
    }
  }
  if (!unmatched.empty()) {
    warnings.push_back(fmt::format("excluded predictions without gold claims: {}", fmt::join(unmatched, ", ")));
  }

  std::vector<Task> tasks;
  for (const auto& origin : origins) {
    for (const auto& [doc_id, g] : gold_by_doc) {  // map order = doc_id order
      auto it = predicted.find({origin, doc_id});
      tasks.push_back(Task{origin, docs.at(doc_id), g, it == predicted.end() ? nullptr : it->second});
    }
  }

  std::size_t workers = config.workers;
  if (workers > 1 && !backends.all_thread_safe()) {
    warnings.push_back("a bound backend is not thread-safe; scoring sequentially");
    workers = 1;
  }

  std::vector<TaskResult> results(tasks.size());
  try {
    detail::parallel_for(tasks.size(), workers,
                         [&](std::size_t i) { results[i] = run_task(tasks[i], backends, config); });
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationAborted(e.what(), assemble(origins, tasks, results, config, warnings));
  }
  return assemble(origins, tasks, results, config, std::move(warnings));
}

EvaluationResult evaluate(const Corpus& corpus, const BackendSet& backends, const RunConfig& config) {
  std::vector<ClaimSet> gold;
  std::vector<ClaimSet> predictions;
  for (const auto& s : corpus.claim_sets) (s.is_gold() ? gold : predictions).push_back(s);
  return evaluate(corpus.documents, gold, predictions, backends, config);
}

const ValidationRow* ValidationTable::find(std::string_view metric, std::string_view method) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.method == method) return &r;
  }
  return nullptr;
}

std::string ValidationTable::render() const {
  std::string out = fmt::format("{:<22}{:<8}{:>8}{:>8}\n", "Metric", "Method", "Value", "N");
  for (const auto& r : rows) {
    out += fmt::format("{:<22}{:<8}{:>8}{:>8}\n", r.metric, r.method, format_value(r.value), r.n);
  }
  return out;
}

ValidationTable validate(std::span<const ClaimScoreRow> claim_scores, std::span<const SetScores> set_scores,
                         std::span<const AnnotationRecord> annotations, const Corpus& corpus,
                         const RunConfig& config) {
  config.validate();
  ValidationTable table;

  // Reference-free metrics: automated binary label vs binarized human grade.
  struct FreeMetric {
    Metric metric;
    std::string_view name;
    int (*label)(const ClaimScores&, double);
  };
  const std::array<FreeMetric, 4> free_metrics{{
      {Metric::kAtomicity, "atomicity", [](const ClaimScores& s, double) { return s.atomicity; }},
      {Metric::kFluency, "fluency", [](const ClaimScores& s, double) { return s.fluency; }},
      {Metric::kDecontextualization, "decontextualization",
       [](const ClaimScores& s, double) { return s.decontextualization; }},
      {Metric::kFaithfulness, "faithfulness",
       [](const ClaimScores& s, double t) { return round_probability(s.faithfulness, t); }},
  }};
  for (const auto& m : free_metrics) {
    std::map<std::string, int> automated;
    for (const auto& row : claim_scores) {
      automated[row.scores.claim_id] = m.label(row.scores, config.faithfulness_rounding);
    }
    auto human = binarize_grades(annotations, m.metric);
    ValidationRow row{std::string(m.name), "F1", std::nullopt, 0};
    for (const auto& [id, v] : human) row.n += automated.contains(id) ? 1 : 0;
    if (row.n > 0) row.value = f1_binary(automated, human);
    table.rows.push_back(std::move(row));
  }

  // Reference-based metrics, per (doc, origin) and claimwise.
  std::map<std::string_view, const Claim*> claims;
  for (const auto& s : corpus.claim_sets) {
    for (const auto& c : s.claims) claims.emplace(c.claim_id, &c);
  }
  auto set_key = [](std::string_view doc, std::string_view origin) {
    return fmt::format("{}@{}", doc, origin);
  };

  auto focus_human = binarize_grades(annotations, Metric::kFocusCheck);
  auto coverage_human = binarize_grades(annotations, Metric::kCoverageCheck);

  // Human focus: share of annotated predicted claims checked relevant.
  std::map<std::string, std::pair<double, std::size_t>> focus_frac;
  for (const auto& [claim_id, v] : focus_human) {
    auto it = claims.find(claim_id);
    if (it == claims.end()) continue;
    auto& f = focus_frac[set_key(it->second->doc_id, it->second->origin)];
    f.first += v;
    ++f.second;
  }
  // Human coverage: share of annotated gold claims checked covered by the origin.
  std::map<std::string, std::pair<double, std::size_t>> coverage_frac;
  std::map<std::string, std::string> coverage_item_set;
  for (const auto& r : annotations) {
    if (r.metric != Metric::kCoverageCheck) continue;
    auto it = claims.find(r.claim_id);
    if (it == claims.end()) continue;
    coverage_item_set[annotation_item_key(r)] = set_key(it->second->doc_id, r.origin);
  }
  for (const auto& [item, v] : coverage_human) {
    auto it = coverage_item_set.find(item);
    if (it == coverage_item_set.end()) continue;
    auto& f = coverage_frac[it->second];
    f.first += v;
    ++f.second;
  }

  std::map<std::string, double> focus_auto, coverage_auto, focus_prob, coverage_prob;
  for (const auto& s : set_scores) {
    focus_auto[set_key(s.doc_id, s.origin)] = s.focus;
    coverage_auto[set_key(s.doc_id, s.origin)] = s.coverage;
    for (const auto& [id, p] : s.claimwise_focus) focus_prob[id] = p;
    for (const auto& [id, p] : s.claimwise_coverage) coverage_prob[fmt::format("{}@{}", id, s.origin)] = p;
  }

  auto rmse_row = [&](std::string_view name, const std::map<std::string, double>& automated,
                      const std::map<std::string, std::pair<double, std::size_t>>& fractions) {
    std::map<std::string, double> human;
    for (const auto& [k, f] : fractions) human[k] = f.first / static_cast<double>(f.second);
    ValidationRow row{std::string(name), "RMSE", std::nullopt, 0};
    for (const auto& [k, v] : human) row.n += automated.contains(k) ? 1 : 0;
    if (row.n > 0) row.value = rmse(automated, human);
    table.rows.push_back(std::move(row));
  };
  auto brier_row = [&](std::string_view name, const std::map<std::string, double>& probabilities,
                       const std::map<std::string, int>& outcomes) {
    ValidationRow row{std::string(name), "Brier", std::nullopt, 0};
    for (const auto& [k, v] : outcomes) row.n += probabilities.contains(k) ? 1 : 0;
    if (row.n > 0) row.value = brier(probabilities, outcomes);
    table.rows.push_back(std::move(row));
  };
  rmse_row("focus", focus_auto, focus_frac);
  rmse_row("coverage", coverage_auto, coverage_frac);
  brier_row("focus", focus_prob, focus_human);
  brier_row("coverage", coverage_prob, coverage_human);

  if (std::none_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.n > 0; })) {
    throw DataError("annotations do not overlap with any automated score");
  }
  return table;
}

const AgreementRow* AgreementTable::find(Metric metric, std::string_view origin) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.origin == origin) return &r;
  }
  return nullptr;
}

std::string AgreementTable::render() const {
  std::vector<std::string> origins;
  for (const auto& r : rows) {
    if (std::find(origins.begin(), origins.end(), r.origin) == origins.end()) origins.push_back(r.origin);
  }
  std::string out;
  for (const auto& origin : origins) {
    if (!out.empty()) out += '\n';
    out += fmt::format("{:<18}", origin.empty() ? "all models" : origin);
    for (const auto& [metric, header] : kAgreementColumns) out += fmt::format("{:>12}", header);
    out += '\n';
    const std::array<std::pair<std::string_view, std::optional<double> AgreementRow::*>, 3> lines{{
        {"Krippendorff's α", &AgreementRow::alpha},
        {"Gwet's AC1", &AgreementRow::ac1},
        {"%-agreement", &AgreementRow::percent},
    }};
    for (const auto& [label, member] : lines) {
      out += fmt::format("{:<18}", label);
      for (const auto& [metric, header] : kAgreementColumns) {
        const auto* r = find(metric, origin);
        out += fmt::format("{:>12}", r ? format_value(r->*member) : std::string("-"));
      }
      out += '\n';
    }
  }
  return out;
}

AgreementTable agreement(std::span<const AnnotationRecord> annotations, bool binarize,
                         const Corpus* per_model_corpus) {
  AgreementTable table;
  auto compute = [&](Metric metric, const std::string& origin, std::span<const AnnotationRecord> records) {
    auto matrix = annotation_matrix(records, metric, binarize);
    if (matrix.items().empty()) return;
    AgreementRow row;
    row.metric = metric;
    row.origin = origin;
    row.items = matrix.items().size();
    // Each coefficient may be undefined on its own; the others still report.
    try { row.percent = percent_agreement(matrix); } catch (const DataError&) {}
    try { row.alpha = krippendorff_alpha(matrix); } catch (const DataError&) {}
    try { row.ac1 = gwet_ac1(matrix); } catch (const DataError&) {}
    table.rows.push_back(std::move(row));
  };

  for (const auto& [metric, header] : kAgreementColumns) compute(metric, "", annotations);

  if (per_model_corpus != nullptr) {
    std::map<std::string_view, std::string_view> origin_of;
    for (const auto& s : per_model_corpus->claim_sets) {
      for (const auto& c : s.claims) origin_of.emplace(c.claim_id, c.origin);
    }
    std::map<std::string, std::vector<AnnotationRecord>> by_origin;
    for (const auto& r : annotations) {
      std::string origin = r.origin;
      if (origin.empty()) {
        auto it = origin_of.find(r.claim_id);
        if (it == origin_of.end()) throw IntegrityError("annotation references unknown claim_id", {r.claim_id});
        origin = std::string(it->second);
      }
      by_origin[origin].push_back(r);
    }
    for (const auto& [origin, records] : by_origin) {
      for (const auto& [metric, header] : kAgreementColumns) compute(metric, origin, records);
    }
  }

  if (std::none_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.percent.has_value(); })) {
    throw DataError("no metric has an item annotated by two or more annotators");
  }
  return table;
}

Leaderboard render_leaderboard(std::span<const EvaluationReport> reports) {
  std::array<std::optional<double>, kLeaderboardColumns.size()> best_full;
  std::array<std::optional<long>, kLeaderboardColumns.size()> best_shown;
  for (const auto& r : reports) {
    for (std::size_t c = 0; c < kLeaderboardColumns.size(); ++c) {
      auto it = r.metric_means.find(std::string(kLeaderboardColumns[c].key));
      if (it == r.metric_means.end()) continue;
      bool lower = kLeaderboardColumns[c].lower_is_better;
      double v = it->second;
      long shown = std::lround(v * 100.0);
      if (!best_full[c] || (lower ? v < *best_full[c] : v > *best_full[c])) best_full[c] = v;
      if (!best_shown[c] || (lower ? shown < *best_shown[c] : shown > *best_shown[c])) best_shown[c] = shown;
    }
  }

  std::size_t name_width = 5;
  for (const auto& r : reports) name_width = std::max(name_width, r.origin.size());
  name_width += 2;

  Leaderboard out;
  out.text = fmt::format("{:<{}}", "Model", name_width);
  for (const auto& col : kLeaderboardColumns) out.text += fmt::format("{:>12}", col.header);
  out.text += '\n';

  nlohmann::ordered_json doc;
  doc["columns"] = nlohmann::ordered_json::array();
  for (const auto& col : kLeaderboardColumns) doc["columns"].push_back(col.key);
  doc["reports"] = nlohmann::ordered_json::array();

  for (const auto& r : reports) {
    out.text += fmt::format("{:<{}}", r.origin, name_width);
    nlohmann::ordered_json row;
    row["origin"] = r.origin;
    row["n_documents"] = r.n_documents;
    row["n_claims"] = r.n_claims;
    row["metric_means"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metric_means) row["metric_means"][k] = v;
    row["best"] = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < kLeaderboardColumns.size(); ++c) {
      auto it = r.metric_means.find(std::string(kLeaderboardColumns[c].key));
      if (it == r.metric_means.end()) {
        out.text += fmt::format("{:>12}", "-");
        continue;
      }
      bool shown_best = std::lround(it->second * 100.0) == *best_shown[c];
      out.text += fmt::format("{:>12}", fmt::format("{:.2f}{}", it->second, shown_best ? "*" : " "));
      if (it->second == *best_full[c]) row["best"].push_back(kLeaderboardColumns[c].key);
    }
    out.text += '\n';
    doc["reports"].push_back(std::move(row));
  }
  out.json = doc.dump(2) + "\n";
  return out;
}

}  // namespace claimeval
