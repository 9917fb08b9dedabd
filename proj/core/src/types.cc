#include "claimeval/types.h"

#include <array>
#include <utility>

#include <fmt/format.h>

#include "claimeval/errors.h"

namespace claimeval {
namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 6> kMetricNames{{
    {Metric::kAtomicity, "atomicity"},
    {Metric::kFluency, "fluency"},
    {Metric::kDecontextualization, "decontextualization"},
    {Metric::kFaithfulness, "faithfulness"},
    {Metric::kFocusCheck, "focus_check"},
    {Metric::kCoverageCheck, "coverage_check"},
}};

}  // namespace

std::string_view to_string(Metric metric) {
  for (const auto& [m, name] : kMetricNames) {
    if (m == metric) return name;
  }
  return "unknown";
}

Metric metric_from_string(std::string_view name) {
  for (const auto& [m, n] : kMetricNames) {
    if (n == name) return m;
  }
  throw DataError(fmt::format("unknown annotation metric '{}'", name));
}

int metric_scale_top(Metric metric) {
  switch (metric) {
    case Metric::kFluency:
    case Metric::kFaithfulness:
      return 3;
    default:
      return 1;
  }
}

std::string annotation_item_key(const AnnotationRecord& record) {
  if (record.origin.empty()) return record.claim_id;
  return record.claim_id + "@" + record.origin;
}

}  // namespace claimeval
