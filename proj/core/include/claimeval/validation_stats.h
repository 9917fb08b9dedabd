#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "claimeval/types.h"

namespace claimeval {

/// Majority label; ties go to the lowest (strictest) tied label.
/// Throws DataError on an empty span.
int majority_label(std::span<const int> labels);

/// Per item (see annotation_item_key): majority grade across annotators,
/// then 1 if it is the top of the metric's scale, else 0. Records of other
/// metrics are ignored.
std::map<std::string, int> binarize_grades(std::span<const AnnotationRecord> records, Metric metric);

/// 1 when p >= threshold.
int round_probability(double p, double threshold = 0.5);

/// F1 of the positive class over the shared ids; 0 when there is no true
/// positive. Throws DataError when the id sets do not intersect.
double f1_binary(const std::map<std::string, int>& predicted, const std::map<std::string, int>& gold);

double rmse(const std::map<std::string, double>& predicted, const std::map<std::string, double>& gold);

/// Mean squared error of probabilities against {0,1} outcomes over shared
/// ids. Throws DataError for probabilities outside [0,1].
double brier(const std::map<std::string, double>& probabilities,
             const std::map<std::string, int>& outcomes);

/// Sparse item x annotator table of nominal labels.
class AnnotationMatrix {
 public:
  AnnotationMatrix() = default;
  /// `categories` declares the label alphabet; labels seen later are added.
  explicit AnnotationMatrix(std::set<int> categories);

  /// Throws DataError if the cell is already filled.
  void add(const std::string& item, const std::string& annotator, int label);

  const std::vector<std::string>& items() const { return items_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::set<int>& categories() const { return categories_; }
  /// Labels present for one item, in annotator insertion order.
  std::vector<int> labels(std::size_t item_index) const;
  std::optional<int> label(const std::string& item, const std::string& annotator) const;
  std::size_t label_count() const { return cells_.size(); }

 private:
  std::vector<std::string> items_;
  std::vector<std::string> annotators_;
  std::map<std::string, std::size_t> item_index_;
  std::map<std::string, std::size_t> annotator_index_;
  std::map<std::pair<std::size_t, std::size_t>, int> cells_;
  std::set<int> categories_;
};

/// Builds a matrix for one metric. With `binarize`, grades become 1 for the
/// scale top and 0 otherwise, and the alphabet is {0,1}; otherwise the
/// alphabet is the metric's full scale.
AnnotationMatrix annotation_matrix(std::span<const AnnotationRecord> records, Metric metric,
                                   bool binarize = true);

/// Share of items with >= 2 labels whose labels are all identical.
/// Throws DataError when no item has two labels.
double percent_agreement(const AnnotationMatrix& matrix);

/// Nominal Krippendorff's alpha from the coincidence matrix. nullopt when
/// expected disagreement is zero. Throws DataError with fewer than two
/// pairable values.
std::optional<double> krippendorff_alpha(const AnnotationMatrix& matrix);

/// Gwet's AC1 over the declared alphabet (Q = |categories|). nullopt when
/// chance agreement is 1. Throws DataError when no item has two labels or
/// Q < 2.
std::optional<double> gwet_ac1(const AnnotationMatrix& matrix);

}  // namespace claimeval
