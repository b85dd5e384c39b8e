#pragma once

#include <optional>
#include <unordered_map>

#include "gdgnn/geodesic.hpp"
#include "gdgnn/gnn.hpp"
#include "gdgnn/graph.hpp"
#include "gdgnn/ledger.hpp"
#include "gdgnn/tape.hpp"

namespace gdgnn {

// kHorizontal     pool one shortest path (distance one-hot behind a flag)
// kVertical       pool endpoint-adjacent geodesic nodes + distance one-hot
// kVerticalDeg    kVertical plus an induced-degree channel per node
// kDistOnly       distance one-hot alone
// kNeighborOnly   pool only the endpoint embeddings, no distance
enum class PoolVariant { kHorizontal, kVertical, kVerticalDeg, kDistOnly, kNeighborOnly };

PoolVariant parse_pool_variant(const std::string& name);
std::string to_string(PoolVariant v);

struct PoolConfig {
  PoolVariant variant = PoolVariant::kVerticalDeg;
  Reducer reducer = Reducer::kSum;         // geodesic pooling (counts stay injective)
  Reducer node_reducer = Reducer::kMean;   // reduction over a node's k-hop pair reps
  Reducer graph_reducer = Reducer::kMean;  // graph readout
  int d_max = 3;
  int node_k = 0;  // k for the node-level neighborhood; 0 means d_max
  bool horizontal_distance = false;
  TiePolicy tie_policy = TiePolicy::lexicographic();

  int effective_node_k() const { return node_k > 0 ? node_k : d_max; }
  int distance_bins() const { return d_max + 2; }  // 0..d_max plus INFINITE
  bool has_distance_channel() const;
  bool has_degree_channel() const { return variant == PoolVariant::kVerticalDeg; }

  // Width of one pair-wise geodesic representation.
  int pair_dim(int emb_dim) const;
  // h_u ⊕ h_v ⊕ pair representation.
  int edge_dim(int emb_dim) const { return 2 * emb_dim + pair_dim(emb_dim); }
  // h_v ⊕ pooled pair representations.
  int node_dim(int emb_dim) const { return emb_dim + pair_dim(emb_dim); }

  void validate() const;
};

// The raw material of one pair-wise geodesic representation, variant already
// applied: which nodes get pooled, their optional degree channel, and the
// (possibly truncated) distance.
struct PairGeodesic {
  NodeId u = 0;
  NodeId v = 0;
  bool within_cutoff = false;
  int distance = 0;                   // valid when within_cutoff
  std::vector<NodeId> members;        // pooled nodes (path order for horizontal)
  std::vector<double> member_degrees; // parallel to members, degree channel only
};

// Caches one DistanceMap per source for reuse across pairs sharing a node.
class DistanceCache {
 public:
  DistanceCache(const Graph& g, int d_max) : g_(g), d_max_(d_max) {}
  const DistanceMap& get(NodeId v);

 private:
  const Graph& g_;
  int d_max_;
  std::unordered_map<NodeId, DistanceMap> maps_;
};

// Edge-level extraction for cfg.variant. u == v yields an empty member set
// at distance 0 by convention. mask_direct_edge hides the edge (u,v) itself
// from the traversal when it exists, the standard treatment of a supervised
// target edge; it bypasses the cache for those pairs.
PairGeodesic extract_pair_geodesic(const Graph& g, NodeId u, NodeId v, DistanceCache& cache,
                                   const PoolConfig& cfg, RunLedger* ledger = nullptr,
                                   bool mask_direct_edge = false);

// Node-level one-sided extraction for the pair (v, s); s must be within
// cfg.d_max of v in dmap_v. Degrees are induced over the single side.
PairGeodesic extract_one_sided_geodesic(const Graph& g, NodeId v, NodeId s,
                                        const DistanceMap& dmap_v, const PoolConfig& cfg,
                                        RunLedger* ledger = nullptr);

// Pools a PairGeodesic into a 1 x pair_dim value: reduced member embeddings
// [⊕ degree channel] ⊕ distance one-hot. Beyond-cutoff pairs produce the
// zero vector with the INFINITE bucket set.
Tape::ValueId pool_pair(Tape& tape, Tape::ValueId embeddings, const PairGeodesic& pair,
                        const PoolConfig& cfg);

// Spec-level conveniences over pool_pair.
Tape::ValueId pool_horizontal(Tape& tape, Tape::ValueId embeddings,
                              const std::optional<HorizontalGeodesic>& path, NodeId u, NodeId v,
                              const PoolConfig& cfg);
Tape::ValueId pool_vertical(Tape& tape, Tape::ValueId embeddings,
                            const std::optional<VerticalGeodesic>& gd, NodeId u, NodeId v,
                            const PoolConfig& cfg);

// h_v ⊕ reduce over pooled one-sided geodesics of v's k-hop neighborhood.
Tape::ValueId node_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings, NodeId v,
                                  const PoolConfig& cfg, RunLedger* ledger = nullptr);

// h_u ⊕ h_v ⊕ pair representation. The embedding channels stay even for
// disconnected pairs, which is what lets the model fall back on them.
Tape::ValueId edge_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings, NodeId u,
                                  NodeId v, DistanceCache& cache, const PoolConfig& cfg,
                                  RunLedger* ledger = nullptr);

// Same pooling applied to an already-extracted pair.
Tape::ValueId edge_representation_from_pair(Tape& tape, Tape::ValueId embeddings,
                                            const PairGeodesic& pair, const PoolConfig& cfg);

// graph_reducer over all node representations.
Tape::ValueId graph_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings,
                                   const PoolConfig& cfg, RunLedger* ledger = nullptr);

}  // namespace gdgnn
