// claimeval: evaluate claim sets, validate metrics against annotations,
// compute agreement, rebuild documents from claim groups.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "claimeval/backends.h"
#include "claimeval/corpus.h"
#include "claimeval/dataset_pipeline.h"
#include "claimeval/errors.h"
#include "claimeval/harness.h"
#include "claimeval/report_io.h"

namespace fs = std::filesystem;
using namespace claimeval;

namespace {

enum ExitCode { kOk = 0, kDataError = 1, kBackendError = 2, kConfigError = 3 };

struct CommonOptions {
  std::string backends_file;
  std::vector<std::string> impls;
  std::vector<std::string> thresholds;
  std::string out_dir;
  std::size_t workers = 1;
  bool verbose = false;
};

std::pair<std::string, std::string> split_assignment(const std::string& arg, const char* flag) {
  auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw ConfigError(fmt::format("{} expects NAME=VALUE, got '{}'", flag, arg));
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
}

std::map<Capability, BackendConfig> load_bindings(const CommonOptions& common) {
  std::map<Capability, BackendConfig> bindings;
  if (!common.backends_file.empty()) {
    std::ifstream in(common.backends_file);
    if (!in) throw ConfigError(fmt::format("cannot open backends file '{}'", common.backends_file));
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("{}: {}", common.backends_file, e.what()));
    }
    if (!doc.is_object()) throw ConfigError(fmt::format("{}: expected an object", common.backends_file));
    for (const auto& [name, settings] : doc.items()) {
      auto cap = capability_from_string(name);
      if (!settings.is_object()) {
        throw ConfigError(fmt::format("{}: '{}' must map to an object", common.backends_file, name));
      }
      BackendConfig config;
      for (const auto& [key, value] : settings.items()) {
        config[key] = value.is_string() ? value.get<std::string>() : value.dump();
      }
      bindings[cap] = std::move(config);
    }
  }
  for (const auto& arg : common.impls) {
    auto [name, id] = split_assignment(arg, "--impl");
    bindings[capability_from_string(name)]["impl"] = id;
  }
  return bindings;
}

// A bare number is accepted as the NLI threshold.
RunConfig make_config(const CommonOptions& common) {
  RunConfig config;
  config.backends = load_bindings(common);
  for (const auto& arg : common.thresholds) {
    if (arg.find('=') == std::string::npos) {
      config.set_threshold("nli", parse_real(arg, "--threshold"));
      continue;
    }
    auto [name, value] = split_assignment(arg, "--threshold");
    config.set_threshold(name, parse_real(value, fmt::format("--threshold {}", name)));
  }
  config.workers = common.workers;
  config.verbose = common.verbose;
  config.out_dir = common.out_dir;
  return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create '{}': {}", dir, ec.message()));
  return dir;
}

Corpus load(const std::string& documents, const std::vector<std::string>& claims) {
  std::vector<fs::path> paths(claims.begin(), claims.end());
  return load_corpus(documents, paths);
}

struct EvaluateOptions {
  std::string documents;
  std::vector<std::string> claims;
  std::string pooling = "claim";
  std::string f_fact = "means";
  bool toss = false;
  bool exact_match = false;
  bool no_reference_free = false;
  bool no_reference_based = false;
};

void apply(const EvaluateOptions& o, RunConfig& config) {
  if (o.pooling == "claim") config.claim_pooling = ClaimPooling::kPerClaim;
  else if (o.pooling == "document") config.claim_pooling = ClaimPooling::kPerDocument;
  else throw ConfigError(fmt::format("--pooling must be claim or document, got '{}'", o.pooling));
  if (o.f_fact == "means") config.f_fact_aggregation = FFactAggregation::kFromMeans;
  else if (o.f_fact == "documents") config.f_fact_aggregation = FFactAggregation::kMeanOfDocuments;
  else throw ConfigError(fmt::format("--f-fact must be means or documents, got '{}'", o.f_fact));
  config.toss_non_decontextualized = o.toss;
  config.decontextualization_match = o.exact_match ? MatchMode::kExact : MatchMode::kNormalized;
  config.reference_free = !o.no_reference_free;
  config.reference_based = !o.no_reference_based;
}

int run_evaluate(const CommonOptions& common, const EvaluateOptions& o) {
  auto config = make_config(common);
  apply(o, config);
  config.validate();
  auto corpus = load(o.documents, o.claims);
  auto backends = resolve_backends(config.backends);
  std::string out_dir = common.out_dir.empty() ? "claimeval_out" : common.out_dir;
  try {
    auto result = evaluate(corpus, backends, config);
    print_warnings(result.warnings);
    write_evaluation(out_dir, result, config.verbose);
    fmt::print("{}", render_leaderboard(result.reports).text);
    if (config.verbose) fmt::print(stderr, "wrote scores to {}\n", out_dir);
  } catch (const EvaluationAborted& e) {
    print_warnings(e.partial().warnings);
    write_evaluation(out_dir, e.partial(), true, ".partial");
    fmt::print(stderr, "partial results written to {}\n", out_dir);
    throw;
  }
  return kOk;
}

struct ValidateOptions {
  EvaluateOptions eval;
  std::string annotations;
  std::string scores_dir;
};

nlohmann::ordered_json to_json(const ValidationTable& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json j;
    j["metric"] = r.metric;
    j["method"] = r.method;
    j["value"] = r.value ? nlohmann::ordered_json(*r.value) : nlohmann::ordered_json(nullptr);
    j["n"] = r.n;
    rows.push_back(std::move(j));
  }
  return rows;
}

int run_validate(const CommonOptions& common, const ValidateOptions& o) {
  auto config = make_config(common);
  apply(o.eval, config);
  config.validate();
  auto corpus = load(o.eval.documents, o.eval.claims);
  auto annotations = load_annotations(o.annotations, &corpus);

  std::vector<ClaimScoreRow> claim_scores;
  std::vector<SetScores> set_scores;
  if (!o.scores_dir.empty()) {
    claim_scores = load_claim_scores(fs::path(o.scores_dir) / "claim_scores.jsonl");
    set_scores = load_set_scores(fs::path(o.scores_dir) / "set_scores.jsonl");
  } else {
    auto result = evaluate(corpus, resolve_backends(config.backends), config);
    print_warnings(result.warnings);
    claim_scores = std::move(result.claim_scores);
    set_scores = std::move(result.set_scores);
  }
  auto table = validate(claim_scores, set_scores, annotations, corpus, config);
  fmt::print("{}", table.render());
  if (!common.out_dir.empty()) {
    auto dir = ensure_dir(common.out_dir);
    write_text(dir / "validation.json", to_json(table).dump(2) + "\n");
    write_text(dir / "validation.txt", table.render());
  }
  return kOk;
}

struct AgreementOptions {
  std::string annotations;
  bool raw_grades = false;
  bool per_model = false;
  std::string documents;
  std::vector<std::string> claims;
};

int run_agreement(const CommonOptions& common, const AgreementOptions& o) {
  std::optional<Corpus> corpus;
  if (!o.documents.empty()) corpus = load(o.documents, o.claims);
  if (o.per_model && !corpus) throw ConfigError("--per-model needs --documents and --claims");
  auto annotations = load_annotations(o.annotations, corpus ? &*corpus : nullptr);
  auto table = agreement(annotations, !o.raw_grades, o.per_model ? &*corpus : nullptr);
  fmt::print("{}", table.render());
  if (!common.out_dir.empty()) {
    auto rows = nlohmann::ordered_json::array();
    auto opt = [](const std::optional<double>& v) {
      return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    for (const auto& r : table.rows) {
      nlohmann::ordered_json j;
      j["metric"] = to_string(r.metric);
      j["origin"] = r.origin.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.origin);
      j["krippendorff_alpha"] = opt(r.alpha);
      j["gwet_ac1"] = opt(r.ac1);
      j["percent_agreement"] = opt(r.percent);
      j["items"] = r.items;
      rows.push_back(std::move(j));
    }
    auto dir = ensure_dir(common.out_dir);
    write_text(dir / "agreement.json", rows.dump(2) + "\n");
    write_text(dir / "agreement.txt", table.render());
  }
  return kOk;
}

struct ReconstructCliOptions {
  std::string claims;
  std::string articles;
  std::string premise_template = "{sentence}";
  std::uint64_t seed = 0;
  std::vector<double> ratios{0.8, 0.1, 0.1};
};

int run_reconstruct(const CommonOptions& common, const ReconstructCliOptions& o) {
  auto config = make_config(common);
  config.validate();
  ReconstructOptions options;
  options.locate.threshold = config.nli_threshold;
  options.locate.premise_template = o.premise_template;
  options.workers = config.workers;
  if (o.ratios.size() != 3) throw ConfigError("--ratios takes three values");

  std::ifstream claims_in(o.claims);
  if (!claims_in) throw DataError(fmt::format("cannot open '{}'", o.claims));
  auto groups = read_claim_groups(claims_in, o.claims);
  std::ifstream articles_in(o.articles);
  if (!articles_in) throw DataError(fmt::format("cannot open '{}'", o.articles));
  auto articles = read_articles(articles_in, o.articles);

  auto backends = resolve_backends(config.backends);
  auto result = reconstruct(groups, articles, *backends.entailment, options);

  auto dir = ensure_dir(common.out_dir.empty() ? "claimeval_out" : common.out_dir);
  std::ostringstream docs, claims, mapping;
  write_documents(docs, result.documents);
  write_claims(claims, result.gold);
  write_mapping(mapping, result.mapping);
  write_text(dir / "documents.jsonl", docs.str());
  write_text(dir / "claims.jsonl", claims.str());
  write_text(dir / "mapping.jsonl", mapping.str());

  std::size_t mapped = result.documents.size();
  fmt::print("mapped {} of {} groups\n", mapped, result.mapping.size());
  if (mapped >= 3) {
    auto split = split_corpus(result.documents, SplitRatios{o.ratios[0], o.ratios[1], o.ratios[2]}, o.seed);
    std::ostringstream split_out;
    write_split(split_out, split);
    write_text(dir / "split.jsonl", split_out.str());
    fmt::print("split train/dev/test: {}/{}/{}\n", split.documents[0].size(), split.documents[1].size(),
               split.documents[2].size());
  } else {
    fmt::print(stderr, "warning: too few documents to split\n");
  }
  return kOk;
}

struct NerRecallOptions {
  std::string documents;
  std::vector<std::string> claims;
};

int run_ner_recall(const CommonOptions& common, const NerRecallOptions& o) {
  auto config = make_config(common);
  auto corpus = load(o.documents, o.claims);
  auto backends = resolve_backends(config.backends);
  std::map<std::string, std::pair<double, std::size_t>> by_origin;
  std::vector<std::string> order;
  for (const auto& set : corpus.claim_sets) {
    if (set.empty()) continue;
    const auto* doc = corpus.find_document(set.doc_id);
    double r = entity_word_recall(*doc, set, *backends.entity_recognizer);
    if (!by_origin.contains(set.origin)) order.push_back(set.origin);
    auto& acc = by_origin[set.origin];
    acc.first += r;
    ++acc.second;
    if (config.verbose) fmt::print(stderr, "{}\t{}\t{:.4f}\n", set.origin, set.doc_id, r);
  }
  for (const auto& origin : order) {
    const auto& [sum, n] = by_origin[origin];
    fmt::print("{:<20}{:>8.4f}{:>8}\n", origin, sum / static_cast<double>(n), n);
  }
  return kOk;
}

int run_render(const CommonOptions& common, const std::string& leaderboard) {
  auto reports = load_reports(leaderboard);
  auto board = render_leaderboard(reports);
  fmt::print("{}", board.text);
  if (!common.out_dir.empty()) {
    auto dir = ensure_dir(common.out_dir);
    write_text(dir / "leaderboard.txt", board.text);
    write_text(dir / "leaderboard.json", board.json);
  }
  return kOk;
}

void add_corpus_options(CLI::App* cmd, std::string& documents, std::vector<std::string>& claims,
                        bool required) {
  auto* d = cmd->add_option("--documents", documents, "Documents JSONL");
  auto* c = cmd->add_option("--claims", claims, "Claims JSONL (gold and/or predictions); repeatable");
  if (required) {
    d->required();
    c->required();
  }
}

void add_evaluate_options(CLI::App* cmd, EvaluateOptions& o) {
  add_corpus_options(cmd, o.documents, o.claims, true);
  cmd->add_option("--pooling", o.pooling, "Claim metric means: claim or document")->capture_default_str();
  cmd->add_option("--f-fact", o.f_fact, "F_fact from: means or documents")->capture_default_str();
  cmd->add_flag("--toss-non-decontextualized", o.toss, "Drop non-decontextualized claims from coverage");
  cmd->add_flag("--exact-decontext", o.exact_match, "Compare decontextualized rewrites byte-exactly");
  cmd->add_flag("--no-reference-free", o.no_reference_free, "Skip per-claim metrics");
  cmd->add_flag("--no-reference-based", o.no_reference_based, "Skip set metrics");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate extracted factual claims against source documents and gold claims."};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--backends", common.backends_file, "JSON file: capability -> backend settings");
  app.add_option("--impl", common.impls, "Bind an implementation, CAPABILITY=ID; repeatable");
  app.add_option("--threshold", common.thresholds,
                 "NAME=R for scribendi, nli, faithfulness; a bare R sets nli; repeatable");
  app.add_option("--out", common.out_dir, "Output directory");
  app.add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", common.verbose, "Progress on stderr; claimwise scores in output");

  EvaluateOptions eval;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predicted claim sets and build the leaderboard");
  add_evaluate_options(evaluate_cmd, eval);

  ValidateOptions val;
  auto* validate_cmd = app.add_subcommand("validate", "Compare automated metrics with human annotations");
  add_evaluate_options(validate_cmd, val.eval);
  validate_cmd->add_option("--annotations", val.annotations, "Annotations JSONL")->required();
  validate_cmd->add_option("--scores", val.scores_dir, "Reuse score files from an evaluate run");

  AgreementOptions agr;
  auto* agreement_cmd = app.add_subcommand("agreement", "Inter-annotator agreement per metric");
  agreement_cmd->add_option("--annotations", agr.annotations, "Annotations JSONL")->required();
  agreement_cmd->add_flag("--raw-grades", agr.raw_grades, "Use the full grade scale instead of binarized labels");
  agreement_cmd->add_flag("--per-model", agr.per_model, "Add one row per model");
  add_corpus_options(agreement_cmd, agr.documents, agr.claims, false);

  ReconstructCliOptions rec;
  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Rebuild source documents from claim groups");
  reconstruct_cmd->add_option("--claims", rec.claims, "Claim groups JSONL")->required();
  reconstruct_cmd->add_option("--articles", rec.articles, "Articles JSONL")->required();
  reconstruct_cmd->add_option("--premise-template", rec.premise_template, "NLI premise; {sentence}, {title}")
      ->capture_default_str();
  reconstruct_cmd->add_option("--seed", rec.seed, "Split seed")->capture_default_str();
  reconstruct_cmd->add_option("--ratios", rec.ratios, "Train, dev, test ratios")->expected(3);

  NerRecallOptions ner;
  auto* ner_cmd = app.add_subcommand("ner-recall", "Entity word recall of claims against source sentences");
  add_corpus_options(ner_cmd, ner.documents, ner.claims, true);

  std::string leaderboard;
  auto* render_cmd = app.add_subcommand("render", "Render a leaderboard.json as a text table");
  render_cmd->add_option("leaderboard", leaderboard, "leaderboard.json")->required();

  // Global flags may follow the subcommand.
  for (auto* cmd : app.get_subcommands({})) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*evaluate_cmd) return run_evaluate(common, eval);
    if (*validate_cmd) return run_validate(common, val);
    if (*agreement_cmd) return run_agreement(common, agr);
    if (*reconstruct_cmd) return run_reconstruct(common, rec);
    if (*ner_cmd) return run_ner_recall(common, ner);
    if (*render_cmd) return run_render(common, leaderboard);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const BackendError& e) {
    fmt::print(stderr, "backend error: {}\n", e.what());
    return kBackendError;
  } catch (const DataError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kDataError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kDataError;
  }
  return kOk;
}
