#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace claimeval {

/// Origin label reserved for human-extracted reference claims.
inline constexpr std::string_view kGoldOrigin = "gold";

/// A page title plus up to three consecutive sentences. Claims are extracted
/// from `source_sentence`; the neighbours only provide context.
struct Document {
  std::string doc_id;
  std::string page_title;
  std::string context_before;
  std::string source_sentence;
  std::string context_after;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Claim {
  std::string claim_id;
  std::string doc_id;
  std::string text;
  std::string origin;

  bool is_gold() const { return origin == kGoldOrigin; }

  friend bool operator==(const Claim&, const Claim&) = default;
};

/// Claims sharing a document and an origin, in file order.
struct ClaimSet {
  std::string doc_id;
  std::string origin;
  std::vector<Claim> claims;

  bool empty() const { return claims.empty(); }
  std::size_t size() const { return claims.size(); }
  bool is_gold() const { return origin == kGoldOrigin; }
};

enum class Metric {
  kAtomicity,
  kFluency,
  kDecontextualization,
  kFaithfulness,
  kFocusCheck,
  kCoverageCheck,
};

std::string_view to_string(Metric metric);
/// Throws DataError for unknown names.
Metric metric_from_string(std::string_view name);

/// Highest legal grade: 3 for the 0-3 scales (fluency, faithfulness), 1 otherwise.
int metric_scale_top(Metric metric);

/// One human judgment of one claim.
///
/// `origin` is only meaningful for coverage checkboxes: a gold claim is
/// judged covered (or not) relative to one model's predicted set, so the
/// model label is part of the key there. It is empty for every other metric.
struct AnnotationRecord {
  std::string claim_id;
  std::string annotator_id;
  Metric metric = Metric::kAtomicity;
  int value = 0;
  std::string origin;
};

/// Identifier of the annotated item: the claim id, qualified by origin for
/// coverage checkboxes.
std::string annotation_item_key(const AnnotationRecord& record);

/// One leaderboard row.
struct EvaluationReport {
  std::string origin;
  std::map<std::string, double> metric_means;
  std::size_t n_documents = 0;
  std::size_t n_claims = 0;
};

}  // namespace claimeval
