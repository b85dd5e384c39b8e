#pragma once

#include <cstdint>
#include <vector>

#include "gdgnn/graph.hpp"

namespace gdgnn {

Graph cycle_graph(NodeId n);
Graph path_graph(NodeId n);
Graph complete_graph(NodeId n);

// Disjoint union; nodes of b are shifted by a.num_nodes().
Graph disjoint_union(const Graph& a, const Graph& b);

// Relabels node i to perm[i]; perm must be a permutation of 0..n-1.
Graph relabel(const Graph& g, const std::vector<NodeId>& perm);

// G(n, p) with a seeded generator.
Graph erdos_renyi(NodeId n, double p, std::uint64_t seed);

// Simple r-regular graph from the pairing model, rejecting pairings with
// loops or multi-edges. Requires n*r even and r < n.
Graph random_regular_graph(NodeId n, int r, std::uint64_t seed);

// Cycle on n nodes plus skip chords (i, i+skip). Requires 2 <= skip < n-1
// and skip != n - skip.
Graph csl_graph(NodeId n, NodeId skip);

// The two classic strongly regular (16,6,2,2) graphs.
Graph shrikhande_graph();
Graph rook4x4_graph();

// Ring of four hub nodes where consecutive hubs are joined by alternating
// bundles of one and three length-2 bridges. All hubs share a 1-WL color and
// all bridge nodes share another, but pairs of hubs differ in how many
// bridge nodes sit between them (1 vs 3).
Graph bridge_ring_graph();

// Deterministic citation-style fixture: topic communities, preferential
// attachment and triadic closure. Degree distribution is heavy-tailed and
// clustering is high, which is what the link-prediction protocol needs.
Graph citation_like_graph(NodeId n, int topics, std::uint64_t seed);

}  // namespace gdgnn
