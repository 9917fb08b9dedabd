#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimeval {

/// An extracted relation. Identity is the undirected entity pair
/// {source, target}; the predicate label is carried along but ignored.
struct Relation {
  std::string source;
  std::string target;
  std::string predicate;
};

/// Relations deduplicated by undirected entity pair, so (A, leads, B) and
/// (B, led_by, A) count once.
class RelationSet {
 public:
  RelationSet() = default;
  RelationSet(std::initializer_list<Relation> relations);

  /// Returns false when the undirected pair is already present.
  bool insert(Relation relation);
  bool contains(std::string_view a, std::string_view b) const;

  std::size_t size() const { return relations_.size(); }
  bool empty() const { return relations_.empty(); }
  const std::vector<Relation>& relations() const { return relations_; }

 private:
  static std::pair<std::string, std::string> key(std::string_view a, std::string_view b);

  std::vector<Relation> relations_;
  std::set<std::pair<std::string, std::string>> pairs_;
};

enum class Capability {
  kRelationExtraction,
  kGrammarCorrection,
  kPerplexity,
  kDecontextualization,
  kAlignment,
  kEntailment,
  kEntityRecognition,
};

std::string_view to_string(Capability capability);
/// Accepts the canonical names ("relation_extraction", "grammar_correction",
/// "perplexity", "decontextualization", "alignment", "entailment", "ner").
/// Throws ConfigError otherwise.
Capability capability_from_string(std::string_view name);
std::span<const Capability> all_capabilities();

class Backend {
 public:
  virtual ~Backend() = default;

  virtual Capability capability() const = 0;
  /// Registry id of the implementation ("mock", "table", "http", ...).
  virtual std::string_view impl_id() const = 0;
  /// Backends that do not override this are called from one thread only.
  virtual bool thread_safe() const { return false; }
};

class RelationExtractor : public Backend {
 public:
  Capability capability() const final { return Capability::kRelationExtraction; }
  virtual RelationSet extract(std::string_view text) const = 0;
};

class GrammarCorrector : public Backend {
 public:
  Capability capability() const final { return Capability::kGrammarCorrection; }
  virtual std::string correct(std::string_view text) const = 0;
};

class PerplexityScorer : public Backend {
 public:
  Capability capability() const final { return Capability::kPerplexity; }
  /// Positive; lower means more fluent.
  virtual double perplexity(std::string_view text) const = 0;
};

class Decontextualizer : public Backend {
 public:
  Capability capability() const final { return Capability::kDecontextualization; }
  virtual std::string decontextualize(std::string_view context, std::string_view sentence) const = 0;
};

/// How well `hypothesis` is supported by `premise`, in [0, 1].
class AlignmentScorer : public Backend {
 public:
  Capability capability() const final { return Capability::kAlignment; }
  /// raw_score clamped to [0, 1]; NaN maps to 0.
  double score(std::string_view premise, std::string_view hypothesis) const;

 protected:
  virtual double raw_score(std::string_view premise, std::string_view hypothesis) const = 0;
};

class EntailmentScorer : public Backend {
 public:
  Capability capability() const final { return Capability::kEntailment; }
  /// Entailment probability clamped to [0, 1]; NaN maps to 0.
  double probability(std::string_view premise, std::string_view hypothesis) const;

 protected:
  virtual double raw_probability(std::string_view premise, std::string_view hypothesis) const = 0;
};

class EntityRecognizer : public Backend {
 public:
  Capability capability() const final { return Capability::kEntityRecognition; }
  /// Surface strings of recognised entities, in text order.
  virtual std::vector<std::string> entities(std::string_view text) const = 0;
};

/// Key-value configuration of one backend. The "impl" key selects the
/// registered implementation; everything else is passed to its factory
/// untouched.
using BackendConfig = std::map<std::string, std::string>;
using BackendFactory = std::function<std::shared_ptr<Backend>(const BackendConfig&)>;

class BackendRegistry {
 public:
  /// Process-wide registry, pre-populated with "mock", "table" and "http".
  static BackendRegistry& global();

  void add(Capability capability, std::string impl_id, BackendFactory factory);
  /// Throws ConfigError for unknown ids (listing the registered ones) and
  /// BackendError when the factory cannot initialise its resources.
  std::shared_ptr<Backend> create(Capability capability, const BackendConfig& config) const;
  std::vector<std::string> ids(Capability capability) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<Capability, std::string>, BackendFactory> factories_;
};

/// Defaults to impl=mock when the config has no "impl" key.
std::shared_ptr<Backend> resolve_backend(Capability capability, const BackendConfig& config);
std::shared_ptr<Backend> resolve_backend(std::string_view capability, const BackendConfig& config);

/// One bound backend per capability.
struct BackendSet {
  std::shared_ptr<const RelationExtractor> relation_extractor;
  std::shared_ptr<const GrammarCorrector> grammar_corrector;
  std::shared_ptr<const PerplexityScorer> perplexity;
  std::shared_ptr<const Decontextualizer> decontextualizer;
  std::shared_ptr<const AlignmentScorer> alignment;
  std::shared_ptr<const EntailmentScorer> entailment;
  std::shared_ptr<const EntityRecognizer> entity_recognizer;

  /// True when every bound backend declares thread safety.
  bool all_thread_safe() const;
  bool has(Capability capability) const;

  static BackendSet mocks();
};

/// Capabilities missing from `bindings` resolve to the mock.
BackendSet resolve_backends(const std::map<Capability, BackendConfig>& bindings);

// Deterministic reference implementations. They ship with the library so the
// full pipeline runs without model downloads.
namespace mock {

/// |tokens(h) ∩ tokens(p)| / |tokens(h)| over lowercased word-token sets;
/// 0 for an empty premise or hypothesis.
double alignment(std::string_view premise, std::string_view hypothesis);

/// 1 when the hypothesis word-token sequence occurs contiguously in the
/// premise; otherwise half the token overlap of `alignment`.
double entailment(std::string_view premise, std::string_view hypothesis);

/// Micro-grammar: clauses separated by " and "; a clause of at least three
/// whitespace tokens "X verb Y..." yields the relation {X, Y...} with
/// predicate "verb". Shorter clauses yield nothing.
RelationSet relations(std::string_view text);

/// Maximal runs of capitalised tokens, trailing punctuation stripped.
std::vector<std::string> entities(std::string_view text);

/// 1 + number of word tokens.
double perplexity(std::string_view text);

class Alignment final : public AlignmentScorer {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }

 protected:
  double raw_score(std::string_view p, std::string_view h) const override { return alignment(p, h); }
};

class Entailment final : public EntailmentScorer {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }

 protected:
  double raw_probability(std::string_view p, std::string_view h) const override {
    return entailment(p, h);
  }
};

class Relations final : public RelationExtractor {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }
  RelationSet extract(std::string_view text) const override { return relations(text); }
};

class IdentityCorrector final : public GrammarCorrector {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }
  std::string correct(std::string_view text) const override { return std::string(text); }
};

class TokenCountPerplexity final : public PerplexityScorer {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }
  double perplexity(std::string_view text) const override { return mock::perplexity(text); }
};

class IdentityDecontextualizer final : public Decontextualizer {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }
  std::string decontextualize(std::string_view, std::string_view sentence) const override {
    return std::string(sentence);
  }
};

class CapitalizedEntities final : public EntityRecognizer {
 public:
  std::string_view impl_id() const override { return "mock"; }
  bool thread_safe() const override { return true; }
  std::vector<std::string> entities(std::string_view text) const override {
    return mock::entities(text);
  }
};

}  // namespace mock
}  // namespace claimeval
