#pragma once

#include "gdgnn/graph.hpp"
#include "gdgnn/matrix.hpp"

namespace gdgnn {

// An extracted query subgraph with per-node distance-pair labels, the
// per-query product of labeling-trick methods. Distances are computed inside
// the subgraph after the target edge (u,v) is removed; the endpoints keep
// the conventional pairs (0,1) and (1,0).
struct LabeledSubgraph {
  Graph subgraph;
  std::vector<NodeId> original_ids;  // subgraph node -> input graph node
  NodeId u_local = 0;
  NodeId v_local = 0;
  int radius = 0;
  std::vector<std::pair<int, int>> dist_pairs;  // per subgraph node; -1 = unreachable

  // One-hot of each distance (bins 0..2*radius plus unreachable), du block
  // then dv block.
  Matrix label_features() const;
};

// Union of the radius-hop balls around u and v, induced edges, target edge
// dropped before labeling.
LabeledSubgraph drnl_like_label(const Graph& g, NodeId u, NodeId v, int radius);

}  // namespace gdgnn
