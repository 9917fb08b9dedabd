#include "claimeval/backends.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "adapters.h"
#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval {
namespace {

constexpr std::array<std::pair<Capability, std::string_view>, 7> kCapabilityNames{{
    {Capability::kRelationExtraction, "relation_extraction"},
    {Capability::kGrammarCorrection, "grammar_correction"},
    {Capability::kPerplexity, "perplexity"},
    {Capability::kDecontextualization, "decontextualization"},
    {Capability::kAlignment, "alignment"},
    {Capability::kEntailment, "entailment"},
    {Capability::kEntityRecognition, "ner"},
}};

constexpr std::array<Capability, 7> kAllCapabilities{
    Capability::kRelationExtraction, Capability::kGrammarCorrection, Capability::kPerplexity,
    Capability::kDecontextualization, Capability::kAlignment,        Capability::kEntailment,
    Capability::kEntityRecognition,
};

double clamp_unit(double x) {
  if (std::isnan(x)) return 0.0;
  return std::clamp(x, 0.0, 1.0);
}

std::string strip_punctuation(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  while (b < e && punct(token[b])) ++b;
  while (e > b && punct(token[e - 1])) --e;
  return std::string(token.substr(b, e - b));
}

void register_mocks(BackendRegistry& r) {
  r.add(Capability::kAlignment, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::Alignment>(); });
  r.add(Capability::kEntailment, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::Entailment>(); });
  r.add(Capability::kRelationExtraction, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::Relations>(); });
  r.add(Capability::kGrammarCorrection, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::IdentityCorrector>(); });
  r.add(Capability::kPerplexity, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::TokenCountPerplexity>(); });
  r.add(Capability::kDecontextualization, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::IdentityDecontextualizer>(); });
  r.add(Capability::kEntityRecognition, "mock",
        [](const BackendConfig&) { return std::make_shared<mock::CapitalizedEntities>(); });
}

template <typename T>
std::shared_ptr<const T> typed(std::shared_ptr<Backend> backend) {
  auto out = std::dynamic_pointer_cast<const T>(std::shared_ptr<const Backend>(std::move(backend)));
  if (!out) throw ConfigError("backend factory returned an implementation of the wrong capability");
  return out;
}

}  // namespace

RelationSet::RelationSet(std::initializer_list<Relation> relations) {
  for (const auto& r : relations) insert(r);
}

std::pair<std::string, std::string> RelationSet::key(std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  return {std::string(a), std::string(b)};
}

bool RelationSet::insert(Relation relation) {
  if (!pairs_.insert(key(relation.source, relation.target)).second) return false;
  relations_.push_back(std::move(relation));
  return true;
}

bool RelationSet::contains(std::string_view a, std::string_view b) const {
  return pairs_.contains(key(a, b));
}

std::string_view to_string(Capability capability) {
  for (const auto& [c, name] : kCapabilityNames) {
    if (c == capability) return name;
  }
  return "unknown";
}

Capability capability_from_string(std::string_view name) {
  for (const auto& [c, n] : kCapabilityNames) {
    if (n == name) return c;
  }
  std::vector<std::string_view> names;
  for (const auto& [c, n] : kCapabilityNames) names.push_back(n);
  throw ConfigError(fmt::format("unknown backend capability '{}' (known: {})", name,
                                fmt::join(names, ", ")));
}

std::span<const Capability> all_capabilities() { return kAllCapabilities; }

double AlignmentScorer::score(std::string_view premise, std::string_view hypothesis) const {
  return clamp_unit(raw_score(premise, hypothesis));
}

double EntailmentScorer::probability(std::string_view premise, std::string_view hypothesis) const {
  return clamp_unit(raw_probability(premise, hypothesis));
}

BackendRegistry& BackendRegistry::global() {
  static BackendRegistry* registry = [] {
    auto* r = new BackendRegistry();
    register_mocks(*r);
    detail::register_builtin_adapters(*r);
    return r;
  }();
  return *registry;
}

void BackendRegistry::add(Capability capability, std::string impl_id, BackendFactory factory) {
  std::lock_guard lock(mutex_);
  factories_[{capability, std::move(impl_id)}] = std::move(factory);
}

std::shared_ptr<Backend> BackendRegistry::create(Capability capability,
                                                 const BackendConfig& config) const {
  auto impl = config.contains("impl") ? config.at("impl") : std::string("mock");
  BackendFactory factory;
  {
    std::lock_guard lock(mutex_);
    auto it = factories_.find({capability, impl});
    if (it != factories_.end()) factory = it->second;
  }
  if (!factory) {
    throw ConfigError(fmt::format("unknown {} backend '{}' (registered: {})", to_string(capability),
                                  impl, fmt::join(ids(capability), ", ")));
  }
  std::shared_ptr<Backend> backend;
  try {
    backend = factory(config);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(fmt::format("{} backend '{}' failed to initialise: {}", to_string(capability), impl,
                                   e.what()));
  }
  if (!backend) {
    throw BackendError(fmt::format("{} backend '{}' failed to initialise", to_string(capability), impl));
  }
  return backend;
}

std::vector<std::string> BackendRegistry::ids(Capability capability) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [key, factory] : factories_) {
    if (key.first == capability) out.push_back(key.second);
  }
  return out;
}

std::shared_ptr<Backend> resolve_backend(Capability capability, const BackendConfig& config) {
  return BackendRegistry::global().create(capability, config);
}

std::shared_ptr<Backend> resolve_backend(std::string_view capability, const BackendConfig& config) {
  return resolve_backend(capability_from_string(capability), config);
}

bool BackendSet::all_thread_safe() const {
  auto safe = [](const auto& b) { return !b || b->thread_safe(); };
  return safe(relation_extractor) && safe(grammar_corrector) && safe(perplexity) &&
         safe(decontextualizer) && safe(alignment) && safe(entailment) && safe(entity_recognizer);
}

bool BackendSet::has(Capability capability) const {
  switch (capability) {
    case Capability::kRelationExtraction: return relation_extractor != nullptr;
    case Capability::kGrammarCorrection: return grammar_corrector != nullptr;
    case Capability::kPerplexity: return perplexity != nullptr;
    case Capability::kDecontextualization: return decontextualizer != nullptr;
    case Capability::kAlignment: return alignment != nullptr;
    case Capability::kEntailment: return entailment != nullptr;
    case Capability::kEntityRecognition: return entity_recognizer != nullptr;
  }
  return false;
}

BackendSet BackendSet::mocks() { return resolve_backends({}); }

BackendSet resolve_backends(const std::map<Capability, BackendConfig>& bindings) {
  auto make = [&](Capability c) {
    auto it = bindings.find(c);
    return resolve_backend(c, it == bindings.end() ? BackendConfig{{"impl", "mock"}} : it->second);
  };
  BackendSet set;
  set.relation_extractor = typed<RelationExtractor>(make(Capability::kRelationExtraction));
  set.grammar_corrector = typed<GrammarCorrector>(make(Capability::kGrammarCorrection));
  set.perplexity = typed<PerplexityScorer>(make(Capability::kPerplexity));
  set.decontextualizer = typed<Decontextualizer>(make(Capability::kDecontextualization));
  set.alignment = typed<AlignmentScorer>(make(Capability::kAlignment));
  set.entailment = typed<EntailmentScorer>(make(Capability::kEntailment));
  set.entity_recognizer = typed<EntityRecognizer>(make(Capability::kEntityRecognition));
  return set;
}

namespace mock {

double alignment(std::string_view premise, std::string_view hypothesis) {
  auto h = text::word_tokens(hypothesis);
  auto p = text::word_tokens(premise);
  if (h.empty() || p.empty()) return 0.0;
  std::set<std::string> hyp(h.begin(), h.end());
  std::set<std::string> prem(p.begin(), p.end());
  std::size_t shared = 0;
  for (const auto& t : hyp) shared += prem.contains(t) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(hyp.size());
}

double entailment(std::string_view premise, std::string_view hypothesis) {
  auto h = text::word_tokens(hypothesis);
  auto p = text::word_tokens(premise);
  if (h.empty() || p.empty()) return 0.0;
  if (std::search(p.begin(), p.end(), h.begin(), h.end()) != p.end()) return 1.0;
  return 0.5 * alignment(premise, hypothesis);
}

RelationSet relations(std::string_view input) {
  RelationSet out;
  std::string_view rest = input;
  constexpr std::string_view kSep = " and ";
  while (true) {
    auto pos = rest.find(kSep);
    auto clause = rest.substr(0, pos);
    auto tokens = text::split_whitespace(clause);
    if (tokens.size() >= 3) {
      std::vector<std::string> object;
      for (std::size_t i = 2; i < tokens.size(); ++i) object.push_back(tokens[i]);
      auto subject = strip_punctuation(tokens[0]);
      auto target = strip_punctuation(fmt::format("{}", fmt::join(object, " ")));
      if (!subject.empty() && !target.empty()) {
        out.insert(Relation{subject, target, strip_punctuation(tokens[1])});
      }
    }
    if (pos == std::string_view::npos) break;
    rest = rest.substr(pos + kSep.size());
  }
  return out;
}

std::vector<std::string> entities(std::string_view input) {
  std::vector<std::string> out;
  std::string current;
  for (const auto& raw : text::split_whitespace(input)) {
    auto token = strip_punctuation(raw);
    bool capitalised = !token.empty() && std::isupper(static_cast<unsigned char>(token[0])) != 0;
    if (capitalised) {
      if (!current.empty()) current += ' ';
      current += token;
    }
    // A run ends at a lowercase token or at punctuation trailing the token.
    bool breaks = !capitalised || token.size() != raw.size();
    if (breaks && !current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

double perplexity(std::string_view input) {
  return 1.0 + static_cast<double>(text::word_tokens(input).size());
}

}  // namespace mock
}  // namespace claimeval
