#pragma once

#include <span>

#include "gdgnn/config.hpp"
#include "gdgnn/gnn.hpp"
#include "gdgnn/graph.hpp"
#include "gdgnn/ledger.hpp"
#include "gdgnn/metrics.hpp"
#include "gdgnn/pooling.hpp"

namespace gdgnn {

enum class Task { kLink, kNode, kGraph };

Task parse_task(const std::string& name);
std::string to_string(Task t);

using Edge = std::pair<NodeId, NodeId>;

struct TrainConfig {
  Task task = Task::kLink;
  LayerKind layer_kind = LayerKind::kGcn;
  int layers = 3;
  int hidden = 32;
  int d_max = 0;  // 0: tied to the number of layers
  PoolVariant variant = PoolVariant::kVerticalDeg;
  Reducer reducer = Reducer::kSum;
  Reducer node_reducer = Reducer::kMean;
  Reducer graph_reducer = Reducer::kMean;
  int node_k = 0;  // 0: tied to d_max
  bool horizontal_distance = false;
  TiePolicy::Kind tie_kind = TiePolicy::kLexicographic;
  double lr = 1e-3;
  int epochs = 20;
  int batch_size = 64;
  double neg_ratio = 1.0;
  std::uint64_t seed = 1;
  double train_ratio = 0.85;
  double valid_ratio = 0.05;
  double test_ratio = 0.10;
  int hits_k = 50;
  int eval_every = 1;  // validation cadence in epochs; 0 disables
  int head_hidden = 0; // 0: same as hidden

  int effective_d_max() const { return d_max > 0 ? d_max : layers; }
  int effective_head_hidden() const { return head_hidden > 0 ? head_hidden : hidden; }
  PoolConfig pool_config() const;
  void validate() const;

  // Every field is addressable by key; unknown keys are an error.
  static TrainConfig from_key_values(const KeyValues& kv);
};

class Adam {
 public:
  Adam(const ModelParams& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  void step(ModelParams& params, const std::vector<Matrix>& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct LinkSplit {
  Graph train_graph;  // message-passing graph: valid/test edges removed
  std::vector<Edge> train_pos, valid_pos, test_pos;
};

// Shuffles the undirected edge set with the seed and removes the valid/test
// shares from the message-passing graph.
LinkSplit split_links(const Graph& g, double train_ratio, double valid_ratio, double test_ratio,
                      std::uint64_t seed);

// Endpoint-corrupted uniform non-edges of g, ratio * |positives| of them.
// Rejection sampling with an exhaustive non-edge fallback for dense graphs.
std::vector<Edge> sample_negatives(const Graph& g, std::span<const Edge> positives, double ratio,
                                   std::uint64_t seed);

// 0..n-1 shuffled and partitioned by the ratios.
struct IndexSplit {
  std::vector<std::int32_t> train, valid, test;
};
IndexSplit split_indices(std::size_t n, double train_ratio, double valid_ratio, double test_ratio,
                         std::uint64_t seed);

// One GNN forward over msg_graph, then a head score per pair. `threads`
// parallelizes geodesic extraction and scoring across pairs (scores stay in
// input order). Pairs that are edges of msg_graph have that edge masked out
// of their own geodesic, so training positives see the same extraction
// protocol as held-out ones.
std::vector<double> score_links(const Graph& msg_graph, const Matrix& x, const ModelParams& params,
                                const PoolConfig& cfg, std::span<const Edge> pairs,
                                RunLedger* ledger = nullptr, DistanceCache* cache = nullptr,
                                int threads = 1);

// One forward, then class logits per requested node.
Matrix score_nodes(const Graph& g, const Matrix& x, const ModelParams& params,
                   const PoolConfig& cfg, std::span<const NodeId> nodes,
                   RunLedger* ledger = nullptr);

// One forward per graph, then class logits per graph.
Matrix score_graphs(const GraphCollection& coll, const ModelParams& params, const PoolConfig& cfg,
                    std::span<const std::int32_t> indices, RunLedger* ledger = nullptr);

struct TrainResult {
  ModelParams model;
  Metrics metrics;
  RunLedger ledger;
  std::vector<double> step_losses;
  int steps = 0;
  LinkSplit split;  // populated for the link task
};

// Adam on logistic loss over train edges plus sampled negatives; exactly one
// gnn_forward per optimization step. Aborts with a diagnostic if the loss
// goes non-finite.
TrainResult train_link(const Graph& g, const TrainConfig& cfg);

// Softmax cross-entropy over labeled nodes (label -1 = unlabeled), 8:1:1
// node split drawn from the seed.
TrainResult train_node(const Graph& g, const std::vector<std::int32_t>& labels,
                       const TrainConfig& cfg);

// Softmax cross-entropy over whole graphs, batched by graph.
TrainResult train_graph_classification(const GraphCollection& coll, const TrainConfig& cfg);

Metrics evaluate_link(const Graph& msg_graph, const Matrix& x, const ModelParams& params,
                      const PoolConfig& cfg, std::span<const Edge> positives,
                      std::span<const Edge> negatives, int hits_k, RunLedger* ledger = nullptr,
                      int threads = 1);

Metrics evaluate_nodes(const Graph& g, const Matrix& x, const ModelParams& params,
                       const PoolConfig& cfg, std::span<const NodeId> nodes,
                       const std::vector<std::int32_t>& labels, RunLedger* ledger = nullptr);

Metrics evaluate_graphs(const GraphCollection& coll, const ModelParams& params,
                        const PoolConfig& cfg, std::span<const std::int32_t> indices,
                        RunLedger* ledger = nullptr);

// Trained-model checkpoint: TrainConfig keys + the ModelParams dump.
void save_checkpoint(const TrainConfig& cfg, const ModelParams& params, const std::string& path);
std::pair<TrainConfig, ModelParams> load_checkpoint(const std::string& path);

}  // namespace gdgnn
