// Production adapters.
//
// "table" replays precomputed model outputs from a JSONL file with records
//   {"input": "<text>" | ["<first>", "<second>"], "output": <value>}
// where <value> is a string (corrector, decontextualizer), a number
// (perplexity, alignment, entailment), a list of strings (ner) or a list of
// {"source", "target", "predicate"} objects (relation extraction).
//
// "http" forwards each request to a model server:
//   POST <url><prefix>/<capability>  {"text": ...}
//                                    {"premise": ..., "hypothesis": ...}
//                                    {"context": ..., "sentence": ...}
//   -> 200 {"output": <value>}
// and checks GET <url><prefix>/health once at construction.

#include <charconv>
#include <fstream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adapters.h"
#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval::detail {
namespace {

using json = nlohmann::json;

std::string require_key(const BackendConfig& config, const std::string& key, Capability capability,
                        std::string_view impl) {
  auto it = config.find(key);
  if (it == config.end() || it->second.empty()) {
    throw BackendError(fmt::format("{} backend '{}' requires config key '{}'", to_string(capability),
                                   impl, key));
  }
  return it->second;
}

int parse_timeout(const BackendConfig& config, Capability capability) {
  auto it = config.find("timeout_s");
  if (it == config.end()) return 60;
  int value = 0;
  auto [end, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), value);
  if (ec != std::errc() || end != it->second.data() + it->second.size() || value <= 0) {
    throw ConfigError(fmt::format("{} backend 'http': timeout_s must be a positive integer, got '{}'",
                                  to_string(capability), it->second));
  }
  return value;
}

std::string pair_key(std::string_view a, std::string_view b) {
  return json::array({a, b}).dump();
}

std::string single_key(std::string_view a) { return json(a).dump(); }

RelationSet relations_from_json(const json& value) {
  RelationSet out;
  for (const auto& r : value) {
    out.insert(Relation{r.at("source").get<std::string>(), r.at("target").get<std::string>(),
                        r.value("predicate", std::string())});
  }
  return out;
}

// Shared lookup store; immutable after construction.
class Table {
 public:
  Table(Capability capability, const BackendConfig& config) : capability_(capability) {
    auto path = require_key(config, "path", capability, "table");
    std::ifstream in(path);
    if (!in) {
      throw BackendError(fmt::format("{} backend 'table': cannot open '{}'", to_string(capability), path));
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        auto record = json::parse(line);
        entries_[record.at("input").dump()] = record.at("output");
      } catch (const json::exception& e) {
        throw BackendError(fmt::format("{}:{}: {}", path, line_no, e.what()));
      }
    }
  }

  const json& lookup(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw BackendError(fmt::format("{} backend 'table' has no output for input {}",
                                     to_string(capability_), key));
    }
    return it->second;
  }

 private:
  Capability capability_;
  std::unordered_map<std::string, json> entries_;
};

class HttpEndpoint {
 public:
  HttpEndpoint(Capability capability, const BackendConfig& config)
      : capability_(capability),
        url_(require_key(config, "url", capability, "http")),
        prefix_(config.contains("prefix") ? config.at("prefix") : std::string()),
        timeout_s_(parse_timeout(config, capability)) {
    auto client = make_client();
    auto res = client.Get(prefix_ + "/health");
    if (!res || res->status != 200) {
      throw BackendError(fmt::format("{} backend 'http': model server at '{}' is not available ({})",
                                     to_string(capability_), url_,
                                     res ? fmt::format("HTTP {}", res->status)
                                         : httplib::to_string(res.error())));
    }
  }

  json call(const json& body) const {
    auto client = make_client();
    auto path = fmt::format("{}/{}", prefix_, to_string(capability_));
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res || res->status != 200) {
      throw BackendError(fmt::format("{} backend 'http': request to {}{} failed ({})",
                                     to_string(capability_), url_, path,
                                     res ? fmt::format("HTTP {}", res->status)
                                         : httplib::to_string(res.error())));
    }
    try {
      return json::parse(res->body).at("output");
    } catch (const json::exception& e) {
      throw BackendError(fmt::format("{} backend 'http': bad response: {}", to_string(capability_), e.what()));
    }
  }

 private:
  httplib::Client make_client() const {
    httplib::Client client(url_);
    client.set_connection_timeout(timeout_s_, 0);
    client.set_read_timeout(timeout_s_, 0);
    return client;
  }

  Capability capability_;
  std::string url_;
  std::string prefix_;
  int timeout_s_;
};

// Converts adapter exceptions raised while decoding a value.
template <typename Fn>
auto decode(Capability capability, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("{} backend returned a malformed value: {}", to_string(capability), e.what()));
  }
}

// One adapter class per capability, templated on the transport.
template <typename Source>
struct Transport;

template <>
struct Transport<Table> {
  static constexpr std::string_view kId = "table";
  static json single(const Table& t, std::string_view, std::string_view a) { return t.lookup(single_key(a)); }
  static json pair(const Table& t, std::string_view, std::string_view, std::string_view a,
                   std::string_view b) {
    return t.lookup(pair_key(a, b));
  }
};

template <>
struct Transport<HttpEndpoint> {
  static constexpr std::string_view kId = "http";
  static json single(const HttpEndpoint& h, std::string_view field, std::string_view a) {
    return h.call(json{{std::string(field), a}});
  }
  static json pair(const HttpEndpoint& h, std::string_view first, std::string_view second,
                   std::string_view a, std::string_view b) {
    return h.call(json{{std::string(first), a}, {std::string(second), b}});
  }
};

template <typename Source>
class RelationAdapter final : public RelationExtractor {
 public:
  explicit RelationAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }
  RelationSet extract(std::string_view t) const override {
    return decode(capability(), [&] { return relations_from_json(Transport<Source>::single(source_, "text", t)); });
  }

 private:
  Source source_;
};

template <typename Source>
class CorrectorAdapter final : public GrammarCorrector {
 public:
  explicit CorrectorAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }
  std::string correct(std::string_view t) const override {
    return decode(capability(), [&] { return Transport<Source>::single(source_, "text", t).template get<std::string>(); });
  }

 private:
  Source source_;
};

template <typename Source>
class PerplexityAdapter final : public PerplexityScorer {
 public:
  explicit PerplexityAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }
  double perplexity(std::string_view t) const override {
    return decode(capability(), [&] { return Transport<Source>::single(source_, "text", t).template get<double>(); });
  }

 private:
  Source source_;
};

template <typename Source>
class DecontextualizerAdapter final : public Decontextualizer {
 public:
  explicit DecontextualizerAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }
  std::string decontextualize(std::string_view context, std::string_view sentence) const override {
    return decode(capability(), [&] {
      return Transport<Source>::pair(source_, "context", "sentence", context, sentence)
          .template get<std::string>();
    });
  }

 private:
  Source source_;
};

template <typename Source>
class AlignmentAdapter final : public AlignmentScorer {
 public:
  explicit AlignmentAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }

 protected:
  double raw_score(std::string_view p, std::string_view h) const override {
    return decode(capability(), [&] {
      return Transport<Source>::pair(source_, "premise", "hypothesis", p, h).template get<double>();
    });
  }

 private:
  Source source_;
};

template <typename Source>
class EntailmentAdapter final : public EntailmentScorer {
 public:
  explicit EntailmentAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }

 protected:
  double raw_probability(std::string_view p, std::string_view h) const override {
    return decode(capability(), [&] {
      return Transport<Source>::pair(source_, "premise", "hypothesis", p, h).template get<double>();
    });
  }

 private:
  Source source_;
};

template <typename Source>
class EntityAdapter final : public EntityRecognizer {
 public:
  explicit EntityAdapter(const BackendConfig& c) : source_(capability(), c) {}
  std::string_view impl_id() const override { return Transport<Source>::kId; }
  bool thread_safe() const override { return true; }
  std::vector<std::string> entities(std::string_view t) const override {
    return decode(capability(), [&] {
      return Transport<Source>::single(source_, "text", t).template get<std::vector<std::string>>();
    });
  }

 private:
  Source source_;
};

template <typename Source>
void register_transport(BackendRegistry& r) {
  std::string id(Transport<Source>::kId);
  auto factory = [](auto tag) {
    using Adapter = typename decltype(tag)::type;
    return [](const BackendConfig& c) -> std::shared_ptr<Backend> { return std::make_shared<Adapter>(c); };
  };
  r.add(Capability::kRelationExtraction, id, factory(std::type_identity<RelationAdapter<Source>>{}));
  r.add(Capability::kGrammarCorrection, id, factory(std::type_identity<CorrectorAdapter<Source>>{}));
  r.add(Capability::kPerplexity, id, factory(std::type_identity<PerplexityAdapter<Source>>{}));
  r.add(Capability::kDecontextualization, id, factory(std::type_identity<DecontextualizerAdapter<Source>>{}));
  r.add(Capability::kAlignment, id, factory(std::type_identity<AlignmentAdapter<Source>>{}));
  r.add(Capability::kEntailment, id, factory(std::type_identity<EntailmentAdapter<Source>>{}));
  r.add(Capability::kEntityRecognition, id, factory(std::type_identity<EntityAdapter<Source>>{}));
}

}  // namespace

void register_builtin_adapters(BackendRegistry& registry) {
  register_transport<Table>(registry);
  register_transport<HttpEndpoint>(registry);
}

}  // namespace claimeval::detail
