#include "claimeval/report_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

template <typename Fn>
void for_each_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      if (!record.is_object()) throw ParseError(source, line_no, "expected a JSON object");
      fn(record);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

}  // namespace

void write_claim_scores(std::ostream& out, std::span<const ClaimScoreRow> rows) {
  for (const auto& r : rows) {
    ordered_json j;
    j["claim_id"] = r.scores.claim_id;
    j["doc_id"] = r.doc_id;
    j["origin"] = r.origin;
    j["atomicity"] = r.scores.atomicity;
    j["atomicity_soft"] = r.scores.atomicity_soft;
    j["fluency"] = r.scores.fluency;
    j["decontextualization"] = r.scores.decontextualization;
    j["faithfulness"] = r.scores.faithfulness;
    out << j.dump() << '\n';
  }
}

std::vector<ClaimScoreRow> read_claim_scores(std::istream& in, const std::string& source) {
  std::vector<ClaimScoreRow> rows;
  for_each_line(in, source, [&](const json& j) {
    ClaimScoreRow r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.origin = j.at("origin").get<std::string>();
    r.scores.claim_id = j.at("claim_id").get<std::string>();
    r.scores.atomicity = j.at("atomicity").get<int>();
    r.scores.atomicity_soft = j.at("atomicity_soft").get<double>();
    r.scores.fluency = j.at("fluency").get<int>();
    r.scores.decontextualization = j.at("decontextualization").get<int>();
    r.scores.faithfulness = j.at("faithfulness").get<double>();
    rows.push_back(std::move(r));
  });
  return rows;
}

void write_set_scores(std::ostream& out, std::span<const SetScores> sets, bool include_claimwise) {
  for (const auto& s : sets) {
    ordered_json j;
    j["doc_id"] = s.doc_id;
    j["origin"] = s.origin;
    j["focus"] = s.focus;
    j["coverage"] = s.coverage;
    j["f_fact"] = s.f_fact;
    j["redundancy"] = s.redundancy ? ordered_json(*s.redundancy) : ordered_json(nullptr);
    if (include_claimwise) {
      j["claimwise_focus"] = s.claimwise_focus;
      j["claimwise_coverage"] = s.claimwise_coverage;
    }
    out << j.dump() << '\n';
  }
}

std::vector<SetScores> read_set_scores(std::istream& in, const std::string& source) {
  std::vector<SetScores> sets;
  for_each_line(in, source, [&](const json& j) {
    SetScores s;
    s.doc_id = j.at("doc_id").get<std::string>();
    s.origin = j.at("origin").get<std::string>();
    s.focus = j.at("focus").get<double>();
    s.coverage = j.at("coverage").get<double>();
    s.f_fact = j.at("f_fact").get<double>();
    if (auto it = j.find("redundancy"); it != j.end() && !it->is_null()) s.redundancy = it->get<double>();
    if (auto it = j.find("claimwise_focus"); it != j.end()) {
      s.claimwise_focus = it->get<std::map<std::string, double>>();
    }
    if (auto it = j.find("claimwise_coverage"); it != j.end()) {
      s.claimwise_coverage = it->get<std::map<std::string, double>>();
    }
    sets.push_back(std::move(s));
  });
  return sets;
}

std::string reports_to_json(std::span<const EvaluationReport> reports) {
  return render_leaderboard(reports).json;
}

std::vector<EvaluationReport> reports_from_json(const std::string& text) {
  std::vector<EvaluationReport> reports;
  try {
    json doc = json::parse(text);
    const json& list = doc.is_object() ? doc.at("reports") : doc;
    if (!list.is_array()) throw DataError("leaderboard: expected an array of reports");
    for (const auto& j : list) {
      EvaluationReport r;
      r.origin = j.at("origin").get<std::string>();
      r.n_documents = j.value("n_documents", std::size_t{0});
      r.n_claims = j.value("n_claims", std::size_t{0});
      r.metric_means = j.at("metric_means").get<std::map<std::string, double>>();
      reports.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw DataError(fmt::format("leaderboard: {}", e.what()));
  }
  return reports;
}

void write_evaluation(const std::filesystem::path& dir, const EvaluationResult& result, bool verbose,
                      const std::string& suffix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  std::ostringstream claims;
  write_claim_scores(claims, result.claim_scores);
  write_file(dir / fmt::format("claim_scores{}.jsonl", suffix), claims.str());

  std::ostringstream sets;
  write_set_scores(sets, result.set_scores, verbose);
  write_file(dir / fmt::format("set_scores{}.jsonl", suffix), sets.str());

  auto board = render_leaderboard(result.reports);
  write_file(dir / fmt::format("leaderboard{}.json", suffix), board.json);
  write_file(dir / fmt::format("leaderboard{}.txt", suffix), board.text);
}

std::vector<ClaimScoreRow> load_claim_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_claim_scores(in, path.string());
}

std::vector<SetScores> load_set_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_set_scores(in, path.string());
}

std::vector<EvaluationReport> load_reports(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return reports_from_json(buf.str());
}

}  // namespace claimeval
