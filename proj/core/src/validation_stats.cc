#include "claimeval/validation_stats.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "claimeval/errors.h"

namespace claimeval {
namespace {

template <typename A, typename B>
std::vector<std::string> shared_ids(const std::map<std::string, A>& a, const std::map<std::string, B>& b) {
  std::vector<std::string> out;
  for (const auto& [id, v] : a) {
    if (b.contains(id)) out.push_back(id);
  }
  if (out.empty()) throw DataError("predicted and reference id sets do not intersect");
  return out;
}

// Label counts per item, restricted to items with at least two labels.
std::vector<std::map<int, std::size_t>> pairable_units(const AnnotationMatrix& m) {
  std::vector<std::map<int, std::size_t>> units;
  for (std::size_t i = 0; i < m.items().size(); ++i) {
    auto labels = m.labels(i);
    if (labels.size() < 2) continue;
    std::map<int, std::size_t> counts;
    for (int l : labels) ++counts[l];
    units.push_back(std::move(counts));
  }
  return units;
}

}  // namespace

int majority_label(std::span<const int> labels) {
  if (labels.empty()) throw DataError("majority of an empty label list");
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  // std::map iterates ascending, and only a strictly larger count replaces
  // the current best, so ties resolve to the lowest label.
  int best = counts.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

std::map<std::string, int> binarize_grades(std::span<const AnnotationRecord> records, Metric metric) {
  std::map<std::string, std::vector<int>> grades;
  for (const auto& r : records) {
    if (r.metric == metric) grades[annotation_item_key(r)].push_back(r.value);
  }
  const int top = metric_scale_top(metric);
  std::map<std::string, int> out;
  for (const auto& [item, values] : grades) out[item] = majority_label(values) == top ? 1 : 0;
  return out;
}

int round_probability(double p, double threshold) { return p >= threshold ? 1 : 0; }

double f1_binary(const std::map<std::string, int>& predicted, const std::map<std::string, int>& gold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& id : shared_ids(predicted, gold)) {
    int p = predicted.at(id);
    int g = gold.at(id);
    if (p == 1 && g == 1) ++tp;
    else if (p == 1) ++fp;
    else if (g == 1) ++fn;
  }
  if (tp == 0) return 0.0;
  double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double rmse(const std::map<std::string, double>& predicted, const std::map<std::string, double>& gold) {
  auto ids = shared_ids(predicted, gold);
  double sum = 0.0;
  for (const auto& id : ids) {
    double d = predicted.at(id) - gold.at(id);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(ids.size()));
}

double brier(const std::map<std::string, double>& probabilities,
             const std::map<std::string, int>& outcomes) {
  auto ids = shared_ids(probabilities, outcomes);
  double sum = 0.0;
  for (const auto& id : ids) {
    double p = probabilities.at(id);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError(fmt::format("probability {} for '{}' is outside [0, 1]", p, id));
    }
    double d = p - static_cast<double>(outcomes.at(id));
    sum += d * d;
  }
  return sum / static_cast<double>(ids.size());
}

AnnotationMatrix::AnnotationMatrix(std::set<int> categories) : categories_(std::move(categories)) {}

void AnnotationMatrix::add(const std::string& item, const std::string& annotator, int label) {
  auto [it, new_item] = item_index_.emplace(item, items_.size());
  if (new_item) items_.push_back(item);
  auto [at, new_annotator] = annotator_index_.emplace(annotator, annotators_.size());
  if (new_annotator) annotators_.push_back(annotator);
  if (!cells_.emplace(std::make_pair(it->second, at->second), label).second) {
    throw DataError(fmt::format("item '{}' already has a label from annotator '{}'", item, annotator));
  }
  categories_.insert(label);
}

std::vector<int> AnnotationMatrix::labels(std::size_t item_index) const {
  std::vector<int> out;
  auto it = cells_.lower_bound({item_index, 0});
  for (; it != cells_.end() && it->first.first == item_index; ++it) out.push_back(it->second);
  return out;
}

std::optional<int> AnnotationMatrix::label(const std::string& item, const std::string& annotator) const {
  auto i = item_index_.find(item);
  auto a = annotator_index_.find(annotator);
  if (i == item_index_.end() || a == annotator_index_.end()) return std::nullopt;
  auto it = cells_.find({i->second, a->second});
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

AnnotationMatrix annotation_matrix(std::span<const AnnotationRecord> records, Metric metric,
                                   bool binarize) {
  const int top = metric_scale_top(metric);
  std::set<int> alphabet;
  if (binarize) {
    alphabet = {0, 1};
  } else {
    for (int v = 0; v <= top; ++v) alphabet.insert(v);
  }
  AnnotationMatrix m(std::move(alphabet));
  for (const auto& r : records) {
    if (r.metric != metric) continue;
    int label = binarize ? (r.value == top ? 1 : 0) : r.value;
    m.add(annotation_item_key(r), r.annotator_id, label);
  }
  return m;
}

double percent_agreement(const AnnotationMatrix& matrix) {
  std::size_t multi = 0;
  std::size_t unanimous = 0;
  for (std::size_t i = 0; i < matrix.items().size(); ++i) {
    auto labels = matrix.labels(i);
    if (labels.size() < 2) continue;
    ++multi;
    if (std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels.front(); })) {
      ++unanimous;
    }
  }
  if (multi == 0) throw DataError("percent agreement needs an item with at least two labels");
  return static_cast<double>(unanimous) / static_cast<double>(multi);
}

std::optional<double> krippendorff_alpha(const AnnotationMatrix& matrix) {
  auto units = pairable_units(matrix);
  if (units.empty()) throw DataError("Krippendorff's alpha needs at least two pairable values");

  // Coincidence matrix o_ck: each ordered pair of values within a unit of
  // m_u values contributes 1 / (m_u - 1).
  std::map<std::pair<int, int>, double> coincidence;
  for (const auto& counts : units) {
    std::size_t m_u = 0;
    for (const auto& [l, n] : counts) m_u += n;
    const double w = 1.0 / static_cast<double>(m_u - 1);
    for (const auto& [c, n_c] : counts) {
      for (const auto& [k, n_k] : counts) {
        double pairs = c == k ? static_cast<double>(n_c * (n_c - 1))
                              : static_cast<double>(n_c * n_k);
        if (pairs > 0.0) coincidence[{c, k}] += pairs * w;
      }
    }
  }

  std::map<int, double> marginals;
  double n = 0.0;
  for (const auto& [ck, o] : coincidence) {
    marginals[ck.first] += o;
    n += o;
  }

  double observed = 0.0;
  for (const auto& [ck, o] : coincidence) {
    if (ck.first != ck.second) observed += o;
  }
  double expected = 0.0;
  for (const auto& [c, n_c] : marginals) {
    for (const auto& [k, n_k] : marginals) {
      if (c != k) expected += n_c * n_k;
    }
  }
  expected /= (n - 1.0);
  if (expected == 0.0) return std::nullopt;
  return 1.0 - observed / expected;
}

std::optional<double> gwet_ac1(const AnnotationMatrix& matrix) {
  const auto& categories = matrix.categories();
  const std::size_t q = categories.size();
  if (q < 2) throw DataError("Gwet's AC1 needs at least two categories");

  double pa_sum = 0.0;
  std::size_t pa_items = 0;
  std::map<int, double> pi;
  std::size_t all_items = 0;
  for (std::size_t i = 0; i < matrix.items().size(); ++i) {
    auto labels = matrix.labels(i);
    if (labels.empty()) continue;
    ++all_items;
    std::map<int, std::size_t> counts;
    for (int l : labels) ++counts[l];
    const double r_i = static_cast<double>(labels.size());
    for (const auto& [k, r_ik] : counts) pi[k] += static_cast<double>(r_ik) / r_i;
    if (labels.size() >= 2) {
      double agree = 0.0;
      for (const auto& [k, r_ik] : counts) {
        agree += static_cast<double>(r_ik) * static_cast<double>(r_ik - 1);
      }
      pa_sum += agree / (r_i * (r_i - 1.0));
      ++pa_items;
    }
  }
  if (pa_items == 0) throw DataError("Gwet's AC1 needs an item with at least two labels");

  const double pa = pa_sum / static_cast<double>(pa_items);
  double pe = 0.0;
  for (int k : categories) {
    double p = pi.contains(k) ? pi.at(k) / static_cast<double>(all_items) : 0.0;
    pe += p * (1.0 - p);
  }
  pe /= static_cast<double>(q - 1);
  if (pe == 1.0) return std::nullopt;
  return (pa - pe) / (1.0 - pe);
}

}  // namespace claimeval
