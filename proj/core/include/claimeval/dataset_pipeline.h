#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimeval/backends.h"
#include "claimeval/types.h"

namespace claimeval {

/// Claims that share one (unknown) source sentence, with the article titles
/// cited in their gold evidence.
struct ClaimGroup {
  std::string group_id;
  std::vector<std::string> claim_ids;
  std::vector<std::string> claims;
  std::vector<std::string> evidence_articles;  // multiset
};

struct ArticleSentences {
  std::string title;
  std::vector<std::string> sentences;
};

/// Most frequent evidence article; ties go to the lexicographically smallest
/// title. nullopt for a group without evidence.
std::optional<std::string> select_article(const ClaimGroup& group);

struct LocateOptions {
  double threshold = 0.5;
  /// Premise fed to the entailment backend; "{sentence}" and "{title}" are
  /// substituted.
  std::string premise_template = "{sentence}";
};

/// Index of the sentence entailing the most group claims (probability >=
/// threshold). Ties: higher mean probability over the group, then the
/// earliest index. nullopt when no sentence entails any claim.
std::optional<std::size_t> locate_source_sentence(const ClaimGroup& group,
                                                  const ArticleSentences& article,
                                                  const EntailmentScorer& nli,
                                                  const LocateOptions& options = {});

/// Title plus the sentence at `index` and its neighbours (empty at article
/// boundaries).
Document build_document(const ArticleSentences& article, std::size_t index, std::string doc_id);

enum class Split { kTrain = 0, kDev = 1, kTest = 2 };
std::string_view to_string(Split split);

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  std::map<std::string, Split> assignment;  // doc_id -> split
  std::array<std::vector<Document>, 3> documents;
  std::array<double, 3> targets{};  // target document counts
};

/// Title-disjoint split. Title groups are visited largest first (ties in a
/// seed-determined order) and each goes to the split furthest below its
/// target document count.
CorpusSplit split_corpus(std::span<const Document> documents, SplitRatios ratios = {},
                         std::uint64_t seed = 0);

/// |E_src ∩ E_claims| / |E_src| over lowercased entity words, where E_src
/// comes from the source sentence and E_claims from every claim. 1 when the
/// source has no entities.
double entity_word_recall(const Document& source, const ClaimSet& claims, const EntityRecognizer& ner);

// Reconstruction inputs: one claim per line
//   {"group_id", "text", "evidence_articles": [...], "claim_id"?}
// and one article per line {"title", "sentences": [...]}.
std::vector<ClaimGroup> read_claim_groups(std::istream& in, const std::string& source = "<claims>");
std::vector<ArticleSentences> read_articles(std::istream& in, const std::string& source = "<articles>");

struct MappingEntry {
  std::string group_id;
  std::string status;  // "mapped" or "tossed"
  std::string reason;  // why a group was tossed
  std::string doc_id;
  std::string article;
  std::optional<std::size_t> sentence_index;
};

struct Reconstruction {
  std::vector<Document> documents;
  std::vector<ClaimSet> gold;
  std::vector<MappingEntry> mapping;  // one entry per group, input order
};

struct ReconstructOptions {
  LocateOptions locate;
  std::size_t workers = 1;  // used only with a thread-safe backend
};

/// Maps every group to a document (doc_id = group_id) or tosses it.
Reconstruction reconstruct(std::span<const ClaimGroup> groups,
                           std::span<const ArticleSentences> articles, const EntailmentScorer& nli,
                           const ReconstructOptions& options = {});

void write_mapping(std::ostream& out, std::span<const MappingEntry> mapping);
void write_split(std::ostream& out, const CorpusSplit& split);

}  // namespace claimeval
