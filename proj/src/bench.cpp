#include "gdgnn/bench.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include "gdgnn/labeling.hpp"

namespace gdgnn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

BenchMethod parse_bench_method(const std::string& name) {
  if (name == "gdgnn") return BenchMethod::kGdgnn;
  if (name == "subgraph-baseline" || name == "baseline") return BenchMethod::kSubgraphBaseline;
  throw DataError("unknown bench method: " + name + " (expected gdgnn|subgraph-baseline)");
}

std::string to_string(BenchMethod m) {
  return m == BenchMethod::kGdgnn ? "gdgnn" : "subgraph-baseline";
}

std::vector<Edge> disjoint_queries(const Graph& g, std::size_t count, std::uint64_t seed) {
  if (2 * count > static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("disjoint_queries: not enough nodes for disjoint endpoints");
  std::vector<NodeId> nodes(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v) nodes[static_cast<std::size_t>(v)] = v;
  std::mt19937_64 rng(seed);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  std::vector<Edge> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(nodes[2 * i], nodes[2 * i + 1]);
  return out;
}

namespace {

BenchResult run_gdgnn(const Graph& g, std::span<const Edge> queries, const BenchConfig& cfg) {
  BenchResult r;
  auto t0 = Clock::now();
  const Matrix x = ones_degree_features(g);
  ModelDims dims;
  dims.layers = cfg.layers;
  dims.input_dim = static_cast<int>(x.cols());
  dims.hidden = cfg.hidden;
  dims.head_input = cfg.pool.edge_dim(cfg.hidden);
  dims.head_hidden = cfg.hidden;
  dims.head_output = 1;
  ModelParams params = ModelParams::init(dims, cfg.seed);
  r.ledger.add_seconds("setup", seconds_since(t0));

  t0 = Clock::now();
  Tape tape(params.num_slots());
  auto ids = register_params(tape, params);
  Tape::ValueId x_id = tape.constant(x);
  Tape::ValueId h = gnn_forward_on_tape(tape, g, x_id, params, ids, &r.ledger);
  r.ledger.add_seconds("forward", seconds_since(t0));

  t0 = Clock::now();
  DistanceCache cache(g, cfg.pool.d_max);
  std::vector<Tape::ValueId> reps;
  reps.reserve(queries.size());
  for (const Edge& q : queries) {
    PairGeodesic pair = extract_pair_geodesic(g, q.first, q.second, cache, cfg.pool, &r.ledger,
                                               /*mask_direct_edge=*/true);
    reps.push_back(edge_representation_from_pair(tape, h, pair, cfg.pool));
  }
  Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), params, ids);
  const Matrix& z = tape.value(logits);
  r.scores.resize(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) r.scores[i] = z(i, 0);
  r.ledger.add_seconds("queries", seconds_since(t0));
  return r;
}

BenchResult run_baseline(const Graph& g, std::span<const Edge> queries, const BenchConfig& cfg) {
  BenchResult r;
  auto t0 = Clock::now();
  const int radius = cfg.effective_radius();
  const int label_dim = 2 * (2 * radius + 2);
  ModelDims dims;
  dims.layers = cfg.layers;
  dims.input_dim = label_dim;
  dims.hidden = cfg.hidden;
  dims.head_input = 3 * cfg.hidden;  // h_u ⊕ h_v ⊕ pooled subgraph
  dims.head_hidden = cfg.hidden;
  dims.head_output = 1;
  ModelParams params = ModelParams::init(dims, cfg.seed);
  r.ledger.add_seconds("setup", seconds_since(t0));

  t0 = Clock::now();
  r.scores.reserve(queries.size());
  for (const Edge& q : queries) {
    LabeledSubgraph sub = drnl_like_label(g, q.first, q.second, radius);

    Tape tape(params.num_slots());
    auto ids = register_params(tape, params);
    Tape::ValueId x_id = tape.constant(sub.label_features());
    Tape::ValueId h = gnn_forward_on_tape(tape, sub.subgraph, x_id, params, ids, &r.ledger);
    Tape::ValueId rep = tape.concat_cols(
        tape.concat_cols(tape.row_gather(h, {sub.u_local}), tape.row_gather(h, {sub.v_local})),
        tape.reduce_rows(h, Reducer::kSum));
    Tape::ValueId logit = apply_head(tape, rep, params, ids);
    r.scores.push_back(tape.value(logit)(0, 0));
  }
  r.ledger.add_seconds("queries", seconds_since(t0));
  return r;
}

}  // namespace

BenchResult run_benchmark(const Graph& g, std::span<const Edge> queries, BenchMethod method,
                          const BenchConfig& cfg) {
  if (queries.empty()) throw std::invalid_argument("run_benchmark: queries must be nonempty");
  cfg.pool.validate();
  return method == BenchMethod::kGdgnn ? run_gdgnn(g, queries, cfg)
                                       : run_baseline(g, queries, cfg);
}

std::string bench_csv_header() {
  return "method,queries,gnn_forwards,geodesic_extractions,seconds_phase,seconds_total";
}

std::string bench_csv_row(BenchMethod method, std::size_t queries, const BenchResult& r) {
  char buf[256];
  double phase = 0.0;
  auto it = r.ledger.seconds.find("queries");
  if (it != r.ledger.seconds.end()) phase = it->second;
  std::snprintf(buf, sizeof(buf), "%s,%zu,%llu,%llu,%.6f,%.6f", to_string(method).c_str(), queries,
                static_cast<unsigned long long>(r.ledger.gnn_forwards),
                static_cast<unsigned long long>(r.ledger.geodesic_extractions), phase,
                r.ledger.total_seconds());
  return buf;
}

}  // namespace gdgnn
