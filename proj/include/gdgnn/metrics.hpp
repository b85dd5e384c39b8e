#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gdgnn {

struct MetricRow {
  int epoch = 0;
  std::string split;
  std::string metric;
  double value = 0.0;
};

struct Metrics {
  double auc = 0.0;
  double average_precision = 0.0;
  double hits_at_k = 0.0;
  double accuracy = 0.0;
  double final_loss = 0.0;
  std::vector<MetricRow> rows;  // loss curves and per-epoch validation metrics
};

// Rank statistic with tie correction: P(score_pos > score_neg) + 0.5 ties.
double auc_score(std::span<const double> positives, std::span<const double> negatives);

// Mean precision at the rank of each positive, scores descending; ties are
// broken by putting negatives first, making the statistic conservative.
double average_precision_score(std::span<const double> positives,
                               std::span<const double> negatives);

// Fraction of positives scoring strictly above the k-th best negative.
double hits_at_k_score(std::span<const double> positives, std::span<const double> negatives,
                       std::size_t k);

// `epoch,split,metric,value` CSV.
void write_metrics_csv(std::span<const MetricRow> rows, std::ostream& out);

}  // namespace gdgnn
