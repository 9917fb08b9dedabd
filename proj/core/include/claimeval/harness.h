#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "claimeval/backends.h"
#include "claimeval/claim_metrics.h"
#include "claimeval/corpus.h"
#include "claimeval/errors.h"
#include "claimeval/set_metrics.h"
#include "claimeval/types.h"

namespace claimeval {

/// How per-claim metric means are formed for a model.
enum class ClaimPooling {
  kPerClaim,     // mean over all claims of the model
  kPerDocument,  // mean over documents of per-document means
};

/// How the leaderboard F_fact is formed.
enum class FFactAggregation {
  kFromMeans,        // harmonic mean of the model's mean Focus and mean Coverage
  kMeanOfDocuments,  // mean of per-document F_fact
};

struct RunConfig {
  std::map<Capability, BackendConfig> backends;

  bool reference_free = true;   // atomicity, fluency, decontextualization, faithfulness
  bool reference_based = true;  // focus, coverage, F_fact, redundancy

  double scribendi_threshold = kDefaultScribendiThreshold;
  double nli_threshold = 0.5;
  double faithfulness_rounding = 0.5;  // binarization for validation F1
  MatchMode decontextualization_match = MatchMode::kNormalized;

  /// Drop claims that fail decontextualization from the coverage premise.
  bool toss_non_decontextualized = false;
  ClaimPooling claim_pooling = ClaimPooling::kPerClaim;
  FFactAggregation f_fact_aggregation = FFactAggregation::kFromMeans;

  std::size_t workers = 1;
  bool verbose = false;
  std::filesystem::path out_dir;

  /// Sets a threshold by name: "scribendi", "nli" or "faithfulness".
  void set_threshold(const std::string& name, double value);
  std::set<Capability> required_capabilities() const;
  /// Throws ConfigError on out-of-range thresholds or inconsistent toggles.
  void validate() const;
  /// validate() plus a check that every required capability is bound.
  void validate(const BackendSet& backends) const;
};

struct ClaimScoreRow {
  std::string doc_id;
  std::string origin;
  ClaimScores scores;
};

struct EvaluationResult {
  std::vector<EvaluationReport> reports;  // one per origin, input order
  std::vector<ClaimScoreRow> claim_scores;
  std::vector<SetScores> set_scores;
  std::vector<std::pair<std::string, std::string>> no_prediction;  // (doc_id, origin)
  std::vector<std::string> warnings;
};

/// Thrown when a backend fails mid-run; carries whatever finished.
class EvaluationAborted : public BackendError {
 public:
  EvaluationAborted(const std::string& what, EvaluationResult partial)
      : BackendError(what), partial_(std::move(partial)) {}
  const EvaluationResult& partial() const noexcept { return partial_; }

 private:
  EvaluationResult partial_;
};

/// Scores every predicted set against the gold set of its document and
/// aggregates one report per origin. Documents are processed in doc_id order
/// per origin; output order does not depend on `workers`.
EvaluationResult evaluate(std::span<const Document> documents, std::span<const ClaimSet> gold,
                          std::span<const ClaimSet> predictions, const BackendSet& backends,
                          const RunConfig& config);
/// Splits the corpus into gold (origin "gold") and predicted sets.
EvaluationResult evaluate(const Corpus& corpus, const BackendSet& backends, const RunConfig& config);

struct ValidationRow {
  std::string metric;  // atomicity, fluency, decontextualization, faithfulness, focus, coverage
  std::string method;  // F1, RMSE, Brier
  std::optional<double> value;
  std::size_t n = 0;   // compared items
};

struct ValidationTable {
  std::vector<ValidationRow> rows;
  const ValidationRow* find(std::string_view metric, std::string_view method) const;
  std::string render() const;
};

/// Compares automated scores with human annotations: F1 for the
/// reference-free metrics (faithfulness rounded first), RMSE of per-set
/// Focus/Coverage against checkbox fractions, and claimwise Brier scores.
/// `corpus` maps claim ids to their documents. Throws DataError when no
/// metric has any overlap.
ValidationTable validate(std::span<const ClaimScoreRow> claim_scores, std::span<const SetScores> set_scores,
                         std::span<const AnnotationRecord> annotations, const Corpus& corpus,
                         const RunConfig& config);

struct AgreementRow {
  Metric metric = Metric::kAtomicity;
  std::string origin;  // empty when pooled over all models
  std::optional<double> alpha;
  std::optional<double> ac1;
  std::optional<double> percent;
  std::size_t items = 0;
};

struct AgreementTable {
  std::vector<AgreementRow> rows;
  const AgreementRow* find(Metric metric, std::string_view origin = {}) const;
  /// Coefficients as rows, metrics as columns; undefined values as "undef".
  std::string render() const;
};

/// Agreement coefficients per metric, pooled over the whole sample. With
/// `per_model_corpus`, adds one row per (metric, origin).
AgreementTable agreement(std::span<const AnnotationRecord> annotations, bool binarize = true,
                         const Corpus* per_model_corpus = nullptr);

struct Leaderboard {
  std::string text;  // 2-decimal table, best cells marked with '*'
  std::string json;  // full precision
};

/// Columns Atomicity, Fluency, Decontext., Faith., Focus, Coverage, F_fact,
/// Redundancy. Best = highest, except Redundancy (lowest).
Leaderboard render_leaderboard(std::span<const EvaluationReport> reports);

}  // namespace claimeval
