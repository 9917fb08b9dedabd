#pragma once

// Brute-force reference computations and random generators for tests.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "claimeval/types.h"
#include "claimeval/validation_stats.h"

namespace oracle {

// rows = items, columns = annotators; nullopt = missing cell
using Grid = std::vector<std::vector<std::optional<int>>>;

inline claimeval::AnnotationMatrix to_matrix(const Grid& grid, int categories) {
  std::set<int> alphabet;
  for (int k = 0; k < categories; ++k) alphabet.insert(k);
  claimeval::AnnotationMatrix m(alphabet);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      if (grid[i][j]) m.add("i" + std::to_string(i), "a" + std::to_string(j), *grid[i][j]);
    }
  }
  return m;
}

inline std::vector<int> present(const std::vector<std::optional<int>>& row) {
  std::vector<int> out;
  for (const auto& v : row) {
    if (v) out.push_back(*v);
  }
  return out;
}

// Nominal alpha by enumerating value pairs. Observed disagreement walks the
// ordered pairs of distinct coders within each unit (weight 1/(m_u - 1));
// expected disagreement walks every ordered pair of distinct pairable
// values in the whole sample.
inline std::optional<double> krippendorff_alpha(const Grid& grid) {
  std::vector<int> pool;
  double d_o = 0.0;
  for (const auto& row : grid) {
    auto v = present(row);
    if (v.size() < 2) continue;
    double m = static_cast<double>(v.size());
    for (std::size_t a = 0; a < v.size(); ++a) {
      for (std::size_t b = 0; b < v.size(); ++b) {
        if (a != b && v[a] != v[b]) d_o += 1.0 / (m - 1.0);
      }
    }
    pool.insert(pool.end(), v.begin(), v.end());
  }
  double n = static_cast<double>(pool.size());
  double d_e = 0.0;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (a != b && pool[a] != pool[b]) d_e += 1.0;
    }
  }
  d_o /= n;
  d_e /= n * (n - 1.0);
  if (d_e == 0.0) return std::nullopt;
  return 1.0 - d_o / d_e;
}

// Gwet's AC1. Observed agreement: share of agreeing ordered annotator
// pairs per item, averaged over items rated at least twice. Chance
// agreement from per-item category shares averaged over rated items.
inline double gwet_ac1(const Grid& grid, int categories) {
  double pa = 0.0;
  int pa_items = 0;
  std::vector<double> pi(static_cast<std::size_t>(categories), 0.0);
  int rated = 0;
  for (const auto& row : grid) {
    auto v = present(row);
    if (v.empty()) continue;
    ++rated;
    for (int label : v) pi[static_cast<std::size_t>(label)] += 1.0 / static_cast<double>(v.size());
    if (v.size() < 2) continue;
    int agree = 0, total = 0;
    for (std::size_t a = 0; a < v.size(); ++a) {
      for (std::size_t b = 0; b < v.size(); ++b) {
        if (a == b) continue;
        ++total;
        agree += v[a] == v[b] ? 1 : 0;
      }
    }
    pa += static_cast<double>(agree) / static_cast<double>(total);
    ++pa_items;
  }
  pa /= pa_items;
  double pe = 0.0;
  for (double p : pi) {
    p /= rated;
    pe += p * (1.0 - p);
  }
  pe /= categories - 1;
  return (pa - pe) / (1.0 - pe);
}

inline double percent_agreement(const Grid& grid) {
  int multi = 0, same = 0;
  for (const auto& row : grid) {
    auto v = present(row);
    if (v.size() < 2) continue;
    ++multi;
    same += std::set<int>(v.begin(), v.end()).size() == 1 ? 1 : 0;
  }
  return static_cast<double>(same) / multi;
}

inline std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline double f1(const std::map<std::string, int>& predicted, const std::map<std::string, int>& gold) {
  int tp = 0, fp = 0, fn = 0;
  for (const auto& [id, g] : gold) {
    auto it = predicted.find(id);
    if (it == predicted.end()) continue;
    tp += it->second == 1 && g == 1;
    fp += it->second == 1 && g == 0;
    fn += it->second == 0 && g == 1;
  }
  return tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
}

// Random grid with every item rated by at least `min_labels` annotators.
inline Grid random_grid(std::mt19937_64& rng, int items, int annotators, int categories, double missing,
                        int min_labels = 1) {
  std::uniform_int_distribution<int> label(0, categories - 1);
  std::bernoulli_distribution drop(missing);
  Grid g(static_cast<std::size_t>(items), std::vector<std::optional<int>>(static_cast<std::size_t>(annotators)));
  for (auto& row : g) {
    for (auto& cell : row) {
      if (!drop(rng)) cell = label(rng);
    }
    for (int j = 0; static_cast<int>(present(row).size()) < min_labels && j < annotators; ++j) {
      if (!row[static_cast<std::size_t>(j)]) row[static_cast<std::size_t>(j)] = label(rng);
    }
  }
  return g;
}

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{
      "alpha", "river", "city",  "capital", "won",   "prize", "physics", "born",  "river", "flows",
      "in",    "the",   "of",    "paris",   "vienna", "1903", "chemistry", "york", "new",  "music"};
  return words;
}

inline std::string random_sentence(std::mt19937_64& rng, int min_words, int max_words) {
  std::uniform_int_distribution<int> len(min_words, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) {
    if (!s.empty()) s += ' ';
    s += vocabulary()[pick(rng)];
  }
  return s;
}

inline claimeval::ClaimSet random_claim_set(std::mt19937_64& rng, const std::string& doc_id,
                                            const std::string& origin, int min_claims, int max_claims) {
  std::uniform_int_distribution<int> count(min_claims, max_claims);
  std::bernoulli_distribution period(0.5);
  claimeval::ClaimSet set{doc_id, origin, {}};
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    std::string text = random_sentence(rng, 1, 8);
    if (period(rng)) text += '.';
    set.claims.push_back({origin + "-" + doc_id + "-" + std::to_string(i), doc_id, text, origin});
  }
  return set;
}

}  // namespace oracle
