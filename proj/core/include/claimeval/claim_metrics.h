#pragma once

#include <string>
#include <string_view>

#include "claimeval/backends.h"
#include "claimeval/types.h"

namespace claimeval {

/// Reference-free scores of one predicted claim.
struct ClaimScores {
  std::string claim_id;
  int atomicity = 0;            // {0,1}
  double atomicity_soft = 0.0;  // (0,1]
  int fluency = 0;              // {0,1}
  int decontextualization = 0;  // {0,1}
  double faithfulness = 0.0;    // [0,1]
};

inline constexpr double kDefaultScribendiThreshold = 0.8;

/// 1 when the claim describes at most one undirected relation.
int atomicity(std::string_view claim, const RelationExtractor& extractor);
/// 1 / max(1, |relations|).
double atomicity_soft(std::string_view claim, const RelationExtractor& extractor);

/// Judges a correction: 0 when it equals the original (after trimming), +1
/// when it lowers perplexity and max(levenshtein_ratio, token_sort_ratio)
/// reaches `similarity_threshold`, -1 otherwise.
int scribendi(std::string_view original, std::string_view correction, const PerplexityScorer& ppl,
              double similarity_threshold = kDefaultScribendiThreshold);

/// 1 when the corrector cannot improve the claim (Scribendi <= 0).
int fluency(std::string_view claim, const GrammarCorrector& corrector, const PerplexityScorer& ppl,
            double similarity_threshold = kDefaultScribendiThreshold);

enum class MatchMode {
  kNormalized,  // trimmed, internal whitespace collapsed
  kExact,
};

/// 1 when the decontextualizer leaves the claim unchanged given the full
/// document as context.
int decontextualization(const Document& document, std::string_view claim,
                        const Decontextualizer& decontextualizer,
                        MatchMode mode = MatchMode::kNormalized);

/// Alignment of the claim against the full document text.
double faithfulness(const Document& document, std::string_view claim, const AlignmentScorer& aligner);

struct ClaimMetricOptions {
  double scribendi_threshold = kDefaultScribendiThreshold;
  MatchMode decontextualization_match = MatchMode::kNormalized;
};

/// All reference-free metrics for one claim. Backend exceptions are
/// rethrown as BackendError naming the claim.
ClaimScores score_claim(const Document& document, const Claim& claim, const BackendSet& backends,
                        const ClaimMetricOptions& options = {});

}  // namespace claimeval
