#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gdgnn/matrix.hpp"

namespace gdgnn {

using NodeId = std::int32_t;
using EdgeLabel = std::int32_t;

// Raised on malformed input data (files, edge lists, configs). Distinct from
// std::invalid_argument, which is reserved for API contract violations.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct EdgeInput {
  NodeId u = 0;
  NodeId v = 0;
  EdgeLabel label = 0;
};

// Immutable graph in compressed adjacency form. Neighbor slices are sorted
// ascending, deduplicated and free of self-loops; undirected graphs store
// both directions of every edge.
class Graph {
 public:
  Graph() = default;

  NodeId num_nodes() const { return num_nodes_; }
  std::int64_t num_directed_edges() const { return static_cast<std::int64_t>(neighbors_.size()); }
  std::int64_t num_undirected_edges() const { return num_directed_edges() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  NodeId degree(NodeId v) const {
    return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(NodeId u, NodeId v) const;

  bool has_edge_labels() const { return !edge_labels_.empty(); }
  std::span<const EdgeLabel> edge_labels(NodeId v) const {
    return {edge_labels_.data() + offsets_[v], edge_labels_.data() + offsets_[v + 1]};
  }

  bool has_features() const { return !features_.empty(); }
  const Matrix& features() const { return features_; }
  void set_features(Matrix f);

  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  const std::vector<NodeId>& neighbor_list() const { return neighbors_; }

  // All undirected edges as (u, v) with u < v.
  std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

 private:
  friend Graph build_graph(const std::vector<EdgeInput>&, NodeId, bool);

  NodeId num_nodes_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<EdgeLabel> edge_labels_;
  Matrix features_;
};

struct GraphCollection {
  std::vector<Graph> graphs;
  std::vector<std::int32_t> labels;  // empty or one per graph

  bool has_labels() const { return !labels.empty(); }
};

// Canonicalizes an edge list: drops self-loops, deduplicates, sorts each
// neighbor slice, and symmetrizes when undirected. Duplicate edges keep the
// label of their first occurrence.
Graph build_graph(const std::vector<EdgeInput>& edges, NodeId num_nodes, bool undirected = true);

// Nodes w != v with hop distance d(v, w) <= k, ascending.
std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, int k);

// For each node in `nodes`, its number of neighbors that are also in `nodes`.
std::unordered_map<NodeId, int> induced_degrees(const Graph& g, std::span<const NodeId> nodes);

}  // namespace gdgnn
