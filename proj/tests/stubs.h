#pragma once

// Lambda-backed backends for tests.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include "claimeval/backends.h"

namespace stub {

using claimeval::RelationSet;

class Perplexity final : public claimeval::PerplexityScorer {
 public:
  explicit Perplexity(std::map<std::string, double> table) : table_(std::move(table)) {}
  std::string_view impl_id() const override { return "stub"; }
  double perplexity(std::string_view text) const override { return table_.at(std::string(text)); }

 private:
  std::map<std::string, double> table_;
};

class Corrector final : public claimeval::GrammarCorrector {
 public:
  explicit Corrector(std::function<std::string(std::string_view)> fn) : fn_(std::move(fn)) {}
  std::string_view impl_id() const override { return "stub"; }
  std::string correct(std::string_view text) const override { return fn_(text); }

 private:
  std::function<std::string(std::string_view)> fn_;
};

class Decontextualizer final : public claimeval::Decontextualizer {
 public:
  explicit Decontextualizer(std::function<std::string(std::string_view, std::string_view)> fn)
      : fn_(std::move(fn)) {}
  std::string_view impl_id() const override { return "stub"; }
  std::string decontextualize(std::string_view context, std::string_view sentence) const override {
    return fn_(context, sentence);
  }

 private:
  std::function<std::string(std::string_view, std::string_view)> fn_;
};

class Alignment final : public claimeval::AlignmentScorer {
 public:
  explicit Alignment(std::function<double(std::string_view, std::string_view)> fn, bool thread_safe = true)
      : fn_(std::move(fn)), thread_safe_(thread_safe) {}
  std::string_view impl_id() const override { return "stub"; }
  bool thread_safe() const override { return thread_safe_; }

 protected:
  double raw_score(std::string_view p, std::string_view h) const override { return fn_(p, h); }

 private:
  std::function<double(std::string_view, std::string_view)> fn_;
  bool thread_safe_;
};

class Entailment final : public claimeval::EntailmentScorer {
 public:
  explicit Entailment(std::function<double(std::string_view, std::string_view)> fn) : fn_(std::move(fn)) {}
  std::string_view impl_id() const override { return "stub"; }

 protected:
  double raw_probability(std::string_view p, std::string_view h) const override { return fn_(p, h); }

 private:
  std::function<double(std::string_view, std::string_view)> fn_;
};

class Relations final : public claimeval::RelationExtractor {
 public:
  explicit Relations(std::function<RelationSet(std::string_view)> fn) : fn_(std::move(fn)) {}
  std::string_view impl_id() const override { return "stub"; }
  RelationSet extract(std::string_view text) const override { return fn_(text); }

 private:
  std::function<RelationSet(std::string_view)> fn_;
};

}  // namespace stub
