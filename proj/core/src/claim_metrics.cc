#include "claimeval/claim_metrics.h"

#include <algorithm>

#include <fmt/format.h>

#include "claimeval/corpus.h"
#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval {
namespace {

void require_claim(std::string_view claim) {
  if (text::trim(claim).empty()) throw DataError("cannot score an empty claim");
}

}  // namespace

int atomicity(std::string_view claim, const RelationExtractor& extractor) {
  require_claim(claim);
  return extractor.extract(claim).size() <= 1 ? 1 : 0;
}

double atomicity_soft(std::string_view claim, const RelationExtractor& extractor) {
  require_claim(claim);
  auto n = extractor.extract(claim).size();
  return 1.0 / static_cast<double>(std::max<std::size_t>(1, n));
}

int scribendi(std::string_view original, std::string_view correction, const PerplexityScorer& ppl,
              double similarity_threshold) {
  auto a = text::trim(original);
  auto b = text::trim(correction);
  if (a == b) return 0;
  if (!(ppl.perplexity(b) < ppl.perplexity(a))) return -1;
  double similarity = std::max(text::levenshtein_ratio(a, b), text::token_sort_ratio(a, b));
  return similarity >= similarity_threshold ? 1 : -1;
}

int fluency(std::string_view claim, const GrammarCorrector& corrector, const PerplexityScorer& ppl,
            double similarity_threshold) {
  require_claim(claim);
  auto corrected = corrector.correct(claim);
  return scribendi(claim, corrected, ppl, similarity_threshold) <= 0 ? 1 : 0;
}

int decontextualization(const Document& document, std::string_view claim,
                        const Decontextualizer& decontextualizer, MatchMode mode) {
  require_claim(claim);
  auto rewritten = decontextualizer.decontextualize(document_text(document), claim);
  if (mode == MatchMode::kExact) return rewritten == claim ? 1 : 0;
  return text::normalize_whitespace(rewritten) == text::normalize_whitespace(claim) ? 1 : 0;
}

double faithfulness(const Document& document, std::string_view claim, const AlignmentScorer& aligner) {
  require_claim(claim);
  return aligner.score(document_text(document), claim);
}

ClaimScores score_claim(const Document& document, const Claim& claim, const BackendSet& backends,
                        const ClaimMetricOptions& options) {
  ClaimScores s;
  s.claim_id = claim.claim_id;
  try {
    auto relations = backends.relation_extractor->extract(claim.text).size();
    s.atomicity = relations <= 1 ? 1 : 0;
    s.atomicity_soft = 1.0 / static_cast<double>(std::max<std::size_t>(1, relations));
    s.fluency = fluency(claim.text, *backends.grammar_corrector, *backends.perplexity,
                        options.scribendi_threshold);
    s.decontextualization = decontextualization(document, claim.text, *backends.decontextualizer,
                                                options.decontextualization_match);
    s.faithfulness = faithfulness(document, claim.text, *backends.alignment);
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(fmt::format("scoring claim '{}': {}", claim.claim_id, e.what()));
  }
  return s;
}

}  // namespace claimeval
