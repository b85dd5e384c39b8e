#include "gdgnn/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace gdgnn {

double auc_score(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("auc_score: empty score set");
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(neg.begin(), neg.end());
  double wins = 0.0;
  for (double p : positives) {
    auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    auto hi = std::upper_bound(neg.begin(), neg.end(), p);
    wins += static_cast<double>(lo - neg.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  return wins / (static_cast<double>(positives.size()) * static_cast<double>(neg.size()));
}

double average_precision_score(std::span<const double> positives,
                               std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("average_precision_score: empty score set");
  std::vector<std::pair<double, int>> all;
  all.reserve(positives.size() + negatives.size());
  for (double p : positives) all.emplace_back(p, 1);
  for (double n : negatives) all.emplace_back(n, 0);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // negatives first on ties
  });
  double ap = 0.0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].second == 1) {
      ++tp;
      ap += static_cast<double>(tp) / static_cast<double>(i + 1);
    }
  }
  return ap / static_cast<double>(positives.size());
}

double hits_at_k_score(std::span<const double> positives, std::span<const double> negatives,
                       std::size_t k) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("hits_at_k_score: empty score set");
  if (k == 0) throw std::invalid_argument("hits_at_k_score: k must be >= 1");
  if (negatives.size() < k) return 1.0;  // fewer negatives than k: every positive ranks in
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::nth_element(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(k - 1), neg.end(),
                   std::greater<>());
  const double threshold = neg[k - 1];
  std::size_t hits = 0;
  for (double p : positives)
    if (p > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(positives.size());
}

void write_metrics_csv(std::span<const MetricRow> rows, std::ostream& out) {
  out << "epoch,split,metric,value\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g", r.value);
    out << r.epoch << ',' << r.split << ',' << r.metric << ',' << buf << '\n';
  }
}

}  // namespace gdgnn
