#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "claimeval/harness.h"

// Machine-readable score files written by `claimeval evaluate`.
//   claim_scores.jsonl  one ClaimScoreRow per line
//   set_scores.jsonl    one SetScores per line (claimwise maps when verbose)
//   leaderboard.json    {"columns": [...], "reports": [EvaluationReport + best columns]}
//   leaderboard.txt     human view
namespace claimeval {

void write_claim_scores(std::ostream& out, std::span<const ClaimScoreRow> rows);
std::vector<ClaimScoreRow> read_claim_scores(std::istream& in, const std::string& source = "<claim scores>");

void write_set_scores(std::ostream& out, std::span<const SetScores> sets, bool include_claimwise);
std::vector<SetScores> read_set_scores(std::istream& in, const std::string& source = "<set scores>");

std::string reports_to_json(std::span<const EvaluationReport> reports);
std::vector<EvaluationReport> reports_from_json(const std::string& text);

/// Writes every output file into `dir` (created if needed). `suffix` is
/// inserted before the extension, e.g. ".partial".
void write_evaluation(const std::filesystem::path& dir, const EvaluationResult& result, bool verbose,
                      const std::string& suffix = "");

std::vector<ClaimScoreRow> load_claim_scores(const std::filesystem::path& path);
std::vector<SetScores> load_set_scores(const std::filesystem::path& path);
std::vector<EvaluationReport> load_reports(const std::filesystem::path& path);

}  // namespace claimeval
