#pragma once

#include <span>

#include "gdgnn/gnn.hpp"
#include "gdgnn/graph.hpp"
#include "gdgnn/ledger.hpp"
#include "gdgnn/pooling.hpp"
#include "gdgnn/trainer.hpp"

namespace gdgnn {

enum class BenchMethod { kGdgnn, kSubgraphBaseline };

BenchMethod parse_bench_method(const std::string& name);
std::string to_string(BenchMethod m);

struct BenchConfig {
  int layers = 3;
  int hidden = 32;
  std::uint64_t seed = 1;
  PoolConfig pool;
  int radius = 0;  // baseline subgraph hop radius; 0 means pool.d_max

  int effective_radius() const { return radius > 0 ? radius : pool.d_max; }
};

struct BenchResult {
  RunLedger ledger;
  std::vector<double> scores;
};

// Scores every query link with one of the two strategies and accounts for
// every GNN forward. The gdgnn path runs the GNN once on the full graph; the
// baseline extracts a labeled subgraph and runs the GNN per query. Ledger
// phases: "setup", "forward" (the single full-graph pass), and "queries"
// (everything that scales with the query count).
BenchResult run_benchmark(const Graph& g, std::span<const Edge> queries, BenchMethod method,
                          const BenchConfig& cfg);

// `method,queries,gnn_forwards,geodesic_extractions,seconds_phase,seconds_total`
// rows; seconds_phase is the "queries" phase.
std::string bench_csv_header();
std::string bench_csv_row(BenchMethod method, std::size_t queries, const BenchResult& r);

// Endpoint-disjoint query pairs drawn from the node set.
std::vector<Edge> disjoint_queries(const Graph& g, std::size_t count, std::uint64_t seed);

}  // namespace gdgnn
