#include "gdgnn/geodesic.hpp"

#include <algorithm>
#include <queue>
#include <random>

namespace gdgnn {

DistanceMap bfs_distances(const Graph& g, NodeId source, int d_max,
                          std::optional<std::pair<NodeId, NodeId>> skip_edge) {
  if (source < 0 || source >= g.num_nodes())
    throw std::invalid_argument("bfs_distances: bad source");
  if (d_max < 1) throw std::invalid_argument("bfs_distances: d_max must be >= 1");
  DistanceMap m;
  m.source = source;
  m.d_max = d_max;
  m.dist.assign(static_cast<std::size_t>(g.num_nodes()), DistanceMap::kUnreachable);
  m.dist[static_cast<std::size_t>(source)] = 0;
  std::queue<NodeId> q;
  q.push(source);
  while (!q.empty()) {
    NodeId cur = q.front();
    q.pop();
    std::int32_t d = m.dist[static_cast<std::size_t>(cur)];
    if (d >= d_max) continue;
    for (NodeId w : g.neighbors(cur)) {
      if (skip_edge && ((cur == skip_edge->first && w == skip_edge->second) ||
                        (cur == skip_edge->second && w == skip_edge->first)))
        continue;
      auto& dw = m.dist[static_cast<std::size_t>(w)];
      if (dw != DistanceMap::kUnreachable) continue;
      dw = d + 1;
      q.push(w);
    }
  }
  return m;
}

std::optional<HorizontalGeodesic> horizontal_geodesic(const Graph& g, NodeId u, NodeId v,
                                                      const DistanceMap& dmap_v,
                                                      TiePolicy policy) {
  if (dmap_v.source != v) throw std::invalid_argument("horizontal_geodesic: map not rooted at v");
  if (!dmap_v.reachable(u)) return std::nullopt;

  std::mt19937_64 rng;
  if (policy.kind == TiePolicy::kSeededRandom) {
    std::seed_seq seq{policy.seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v)};
    rng.seed(seq);
  }

  HorizontalGeodesic h;
  h.path.push_back(u);
  NodeId cur = u;
  std::vector<NodeId> candidates;
  while (cur != v) {
    std::int32_t d = dmap_v[cur];
    candidates.clear();
    for (NodeId w : g.neighbors(cur)) {
      if (dmap_v.reachable(w) && dmap_v[w] == d - 1) {
        candidates.push_back(w);
        if (policy.kind == TiePolicy::kLexicographic) break;  // neighbors ascending
      }
    }
    NodeId next = candidates.front();
    if (policy.kind == TiePolicy::kSeededRandom && candidates.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      next = candidates[pick(rng)];
    }
    h.path.push_back(next);
    cur = next;
  }
  return h;
}

std::optional<VerticalGeodesic> vertical_geodesic(const Graph& g, NodeId u, NodeId v,
                                                  const DistanceMap& dmap_u,
                                                  const DistanceMap& dmap_v) {
  if (dmap_u.source != u || dmap_v.source != v)
    throw std::invalid_argument("vertical_geodesic: maps must be rooted at u and v");
  if (dmap_u.d_max != dmap_v.d_max)
    throw std::invalid_argument("vertical_geodesic: maps must share d_max");
  if (!dmap_v.reachable(u)) return std::nullopt;

  VerticalGeodesic out;
  out.distance = dmap_v[u];
  for (NodeId w : g.neighbors(u))
    if (dmap_u.reachable(w) && dmap_v.reachable(w) && dmap_u[w] + dmap_v[w] == out.distance)
      out.near_u.push_back(w);
  for (NodeId w : g.neighbors(v))
    if (dmap_u.reachable(w) && dmap_v.reachable(w) && dmap_u[w] + dmap_v[w] == out.distance)
      out.near_v.push_back(w);

  std::vector<NodeId> joint;
  joint.reserve(out.near_u.size() + out.near_v.size());
  joint.insert(joint.end(), out.near_u.begin(), out.near_u.end());
  joint.insert(joint.end(), out.near_v.begin(), out.near_v.end());
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
  out.degrees = induced_degrees(g, joint);
  return out;
}

std::vector<NodeId> vertical_geodesic_one_side(const Graph& g, NodeId v, NodeId s,
                                               const DistanceMap& dmap_v) {
  if (dmap_v.source != v)
    throw std::invalid_argument("vertical_geodesic_one_side: map not rooted at v");
  if (!dmap_v.reachable(s))
    throw std::invalid_argument("vertical_geodesic_one_side: s beyond cutoff");
  std::int32_t ds = dmap_v[s];
  std::vector<NodeId> out;
  for (NodeId w : g.neighbors(s))
    if (dmap_v.reachable(w) && dmap_v[w] == ds - 1) out.push_back(w);
  return out;
}

}  // namespace gdgnn
