#include "gdgnn/labeling.hpp"

#include <algorithm>
#include <queue>

namespace gdgnn {

namespace {

// BFS inside the already-built subgraph.
std::vector<int> subgraph_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId cur = q.front();
    q.pop();
    for (NodeId w : g.neighbors(cur)) {
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(cur)] + 1;
      q.push(w);
    }
  }
  return dist;
}

std::vector<NodeId> ball(const Graph& g, NodeId center, int radius) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<NodeId> out{center};
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(center)] = 0;
  q.push(center);
  while (!q.empty()) {
    NodeId cur = q.front();
    q.pop();
    if (dist[static_cast<std::size_t>(cur)] >= radius) continue;
    for (NodeId w : g.neighbors(cur)) {
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(cur)] + 1;
      out.push_back(w);
      q.push(w);
    }
  }
  return out;
}

}  // namespace

LabeledSubgraph drnl_like_label(const Graph& g, NodeId u, NodeId v, int radius) {
  if (radius < 1) throw std::invalid_argument("drnl_like_label: radius must be >= 1");
  if (u < 0 || u >= g.num_nodes() || v < 0 || v >= g.num_nodes() || u == v)
    throw std::invalid_argument("drnl_like_label: bad target pair");

  std::vector<NodeId> keep = ball(g, u, radius);
  std::vector<NodeId> ball_v = ball(g, v, radius);
  keep.insert(keep.end(), ball_v.begin(), ball_v.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::unordered_map<NodeId, NodeId> local;
  local.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<NodeId>(i);

  std::vector<EdgeInput> edges;
  for (NodeId a : keep) {
    for (NodeId b : g.neighbors(a)) {
      if (a >= b) continue;
      auto it = local.find(b);
      if (it == local.end()) continue;
      if ((a == u && b == v) || (a == v && b == u)) continue;  // target edge removed
      edges.push_back({local[a], it->second, 0});
    }
  }

  LabeledSubgraph out;
  out.subgraph = build_graph(edges, static_cast<NodeId>(keep.size()), /*undirected=*/true);
  out.original_ids = std::move(keep);
  out.u_local = local.at(u);
  out.v_local = local.at(v);
  out.radius = radius;

  auto du = subgraph_distances(out.subgraph, out.u_local);
  auto dv = subgraph_distances(out.subgraph, out.v_local);
  out.dist_pairs.resize(out.original_ids.size());
  for (std::size_t i = 0; i < out.dist_pairs.size(); ++i)
    out.dist_pairs[i] = {du[i], dv[i]};
  out.dist_pairs[static_cast<std::size_t>(out.u_local)] = {0, 1};
  out.dist_pairs[static_cast<std::size_t>(out.v_local)] = {1, 0};
  return out;
}

Matrix LabeledSubgraph::label_features() const {
  const int bins = 2 * radius + 2;  // 0..2*radius plus unreachable
  Matrix x(dist_pairs.size(), static_cast<std::size_t>(2 * bins));
  auto bucket = [&](int d) { return d < 0 || d > 2 * radius ? bins - 1 : d; };
  for (std::size_t i = 0; i < dist_pairs.size(); ++i) {
    x(i, static_cast<std::size_t>(bucket(dist_pairs[i].first))) = 1.0;
    x(i, static_cast<std::size_t>(bins + bucket(dist_pairs[i].second))) = 1.0;
  }
  return x;
}

}  // namespace gdgnn
