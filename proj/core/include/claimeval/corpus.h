#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "claimeval/types.h"

namespace claimeval {

/// Canonical premise string for a document: title, context_before,
/// source_sentence and context_after, each trimmed, empty parts skipped,
/// joined by single spaces.
std::string document_text(const Document& document);

/// Documents plus the claims grouped by (doc_id, origin).
///
/// Claim sets keep the order in which their first claim appeared in the
/// input; claims keep file order within a set.
struct Corpus {
  std::vector<Document> documents;
  std::vector<ClaimSet> claim_sets;

  const Document* find_document(std::string_view doc_id) const;
  const ClaimSet* find_set(std::string_view doc_id, std::string_view origin) const;
  /// Gold sets only, in corpus order.
  std::vector<const ClaimSet*> gold_sets() const;
  /// Non-gold sets only, in corpus order.
  std::vector<const ClaimSet*> predicted_sets() const;
  /// Non-gold origins in order of first appearance.
  std::vector<std::string> predicted_origins() const;
  const Claim* find_claim(std::string_view claim_id) const;
  std::size_t claim_count() const;
};

// Line-delimited JSON readers. `source` names the stream in error messages.
std::vector<Document> read_documents(std::istream& in, const std::string& source = "<documents>");
std::vector<Claim> read_claims(std::istream& in, const std::string& source = "<claims>");
std::vector<AnnotationRecord> read_annotations(std::istream& in,
                                               const std::string& source = "<annotations>");

/// Partitions claims into sets by (doc_id, origin). No claim is dropped.
std::vector<ClaimSet> group_claims(std::vector<Claim> claims);

/// Checks uniqueness of ids, non-empty text and that every claim's doc_id
/// resolves. Throws IntegrityError listing all offenders.
void validate_corpus(const Corpus& corpus);

Corpus load_corpus(const std::filesystem::path& documents_path,
                   const std::filesystem::path& claims_path);
/// Several claim files (e.g. gold plus one file per model) against one
/// document file.
Corpus load_corpus(const std::filesystem::path& documents_path,
                   std::span<const std::filesystem::path> claims_paths);

/// Validates grade ranges and (claim, annotator, metric, origin)
/// uniqueness. When `corpus` is given every claim_id must resolve in it.
std::vector<AnnotationRecord> validate_annotations(std::vector<AnnotationRecord> records,
                                                   const Corpus* corpus = nullptr);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path,
                                               const Corpus* corpus = nullptr);

void write_documents(std::ostream& out, std::span<const Document> documents);
void write_claims(std::ostream& out, std::span<const ClaimSet> sets);
void write_annotations(std::ostream& out, std::span<const AnnotationRecord> records);
void write_corpus(const Corpus& corpus, const std::filesystem::path& documents_path,
                  const std::filesystem::path& claims_path);

}  // namespace claimeval
