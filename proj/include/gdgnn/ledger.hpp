#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace gdgnn {

// Counters for the amortization contract: how many GNN forward passes and
// geodesic extractions a run performed, plus wall-clock per phase.
struct RunLedger {
  std::uint64_t gnn_forwards = 0;
  std::uint64_t geodesic_extractions = 0;
  std::map<std::string, double> seconds;

  void add_seconds(const std::string& phase, double s) { seconds[phase] += s; }
  double total_seconds() const {
    double t = 0.0;
    for (const auto& [name, s] : seconds) t += s;
    return t;
  }
};

}  // namespace gdgnn
