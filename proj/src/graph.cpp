#include "gdgnn/graph.hpp"

#include <algorithm>
#include <queue>

namespace gdgnn {

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

void Graph::set_features(Matrix f) {
  if (!f.empty() && f.rows() != static_cast<std::size_t>(num_nodes_))
    throw std::invalid_argument("set_features: row count must equal num_nodes");
  features_ = std::move(f);
}

std::vector<std::pair<NodeId, NodeId>> Graph::undirected_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(num_directed_edges() / 2));
  for (NodeId u = 0; u < num_nodes_; ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph build_graph(const std::vector<EdgeInput>& edges, NodeId num_nodes, bool undirected) {
  if (num_nodes <= 0) throw std::invalid_argument("build_graph: num_nodes must be positive");
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= num_nodes || e.v < 0 || e.v >= num_nodes)
      throw std::invalid_argument("build_graph: edge endpoint out of range");
  }

  struct Entry {
    NodeId u, v;
    EdgeLabel label;
    std::size_t order;
  };
  std::vector<Entry> work;
  work.reserve(edges.size() * (undirected ? 2 : 1));
  std::size_t order = 0;
  for (const auto& e : edges) {
    if (e.u == e.v) continue;  // self-loops dropped at construction
    work.push_back({e.u, e.v, e.label, order});
    if (undirected) work.push_back({e.v, e.u, e.label, order});
    ++order;
  }
  std::sort(work.begin(), work.end(), [](const Entry& a, const Entry& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.order < b.order;
  });

  Graph g;
  g.num_nodes_ = num_nodes;
  g.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  bool any_label = false;
  for (const auto& e : edges) any_label = any_label || e.label != 0;

  std::vector<NodeId> nbrs;
  std::vector<EdgeLabel> labels;
  nbrs.reserve(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (i > 0 && work[i].u == work[i - 1].u && work[i].v == work[i - 1].v) continue;
    nbrs.push_back(work[i].v);
    labels.push_back(work[i].label);
    ++g.offsets_[static_cast<std::size_t>(work[i].u) + 1];
  }
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.neighbors_ = std::move(nbrs);
  if (any_label) g.edge_labels_ = std::move(labels);
  return g;
}

std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, int k) {
  if (v < 0 || v >= g.num_nodes()) throw std::invalid_argument("k_hop_neighborhood: bad node");
  if (k < 0) throw std::invalid_argument("k_hop_neighborhood: k must be >= 0");
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::vector<NodeId> out;
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(v)] = 0;
  q.push(v);
  while (!q.empty()) {
    NodeId cur = q.front();
    q.pop();
    int d = dist[static_cast<std::size_t>(cur)];
    if (d >= k) continue;
    for (NodeId w : g.neighbors(cur)) {
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = d + 1;
      out.push_back(w);
      q.push(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::unordered_map<NodeId, int> induced_degrees(const Graph& g, std::span<const NodeId> nodes) {
  std::unordered_map<NodeId, int> deg;
  deg.reserve(nodes.size());
  for (NodeId v : nodes) deg.emplace(v, 0);
  for (NodeId v : nodes) {
    int d = 0;
    for (NodeId w : g.neighbors(v))
      if (deg.count(w)) ++d;
    deg[v] = d;
  }
  return deg;
}

}  // namespace gdgnn
