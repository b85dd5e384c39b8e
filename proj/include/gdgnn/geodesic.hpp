#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gdgnn/graph.hpp"

namespace gdgnn {

// Hop distances from one source, truncated at d_max. Distances beyond the
// cutoff are the in-band kUnreachable sentinel, not an error.
struct DistanceMap {
  static constexpr std::int32_t kUnreachable = -1;

  NodeId source = 0;
  int d_max = 0;
  std::vector<std::int32_t> dist;

  bool reachable(NodeId v) const { return dist[static_cast<std::size_t>(v)] != kUnreachable; }
  std::int32_t operator[](NodeId v) const { return dist[static_cast<std::size_t>(v)]; }
};

// One concrete shortest path [u, n_1, ..., v] between a pair.
struct HorizontalGeodesic {
  std::vector<NodeId> path;

  int distance() const { return static_cast<int>(path.size()) - 1; }
};

// Endpoint-adjacent nodes lying on any shortest path of the pair, with their
// degrees in the subgraph induced by near_u ∪ near_v.
struct VerticalGeodesic {
  std::vector<NodeId> near_u;  // subset of N(u), ascending
  std::vector<NodeId> near_v;  // subset of N(v), ascending
  int distance = 0;
  std::unordered_map<NodeId, int> degrees;  // over near_u ∪ near_v
};

struct TiePolicy {
  enum Kind { kLexicographic, kSeededRandom };
  Kind kind = kLexicographic;
  std::uint64_t seed = 0;

  static TiePolicy lexicographic() { return {kLexicographic, 0}; }
  static TiePolicy seeded_random(std::uint64_t seed) { return {kSeededRandom, seed}; }
};

// Exact hop distances up to d_max (inclusive); beyond that, kUnreachable.
// skip_edge, when given, makes the traversal ignore that one undirected edge
// (used to mask a supervised target edge out of its own geodesic).
DistanceMap bfs_distances(const Graph& g, NodeId source, int d_max,
                          std::optional<std::pair<NodeId, NodeId>> skip_edge = std::nullopt);

// Walks from u toward v along any neighbor one step closer to v. The
// lexicographic policy takes the smallest-id candidate; the seeded-random
// policy draws reproducibly from (seed, u, v). nullopt when u cannot reach v
// within dmap_v's cutoff.
std::optional<HorizontalGeodesic> horizontal_geodesic(const Graph& g, NodeId u, NodeId v,
                                                      const DistanceMap& dmap_v,
                                                      TiePolicy policy = TiePolicy::lexicographic());

// nullopt when d(u,v) > d_max.
std::optional<VerticalGeodesic> vertical_geodesic(const Graph& g, NodeId u, NodeId v,
                                                  const DistanceMap& dmap_u,
                                                  const DistanceMap& dmap_v);

// {w in N(s) : d(v,w) = d(v,s) - 1}; the geodesic nodes next to s on the way
// to v. Requires s reachable in dmap_v.
std::vector<NodeId> vertical_geodesic_one_side(const Graph& g, NodeId v, NodeId s,
                                               const DistanceMap& dmap_v);

}  // namespace gdgnn
