#include "gdgnn/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace gdgnn {

Graph cycle_graph(NodeId n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: need n >= 3");
  std::vector<EdgeInput> edges;
  for (NodeId i = 0; i < n; ++i) edges.push_back({i, static_cast<NodeId>((i + 1) % n), 0});
  return build_graph(edges, n);
}

Graph path_graph(NodeId n) {
  if (n < 1) throw std::invalid_argument("path_graph: need n >= 1");
  std::vector<EdgeInput> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, static_cast<NodeId>(i + 1), 0});
  return build_graph(edges, n);
}

Graph complete_graph(NodeId n) {
  if (n < 1) throw std::invalid_argument("complete_graph: need n >= 1");
  std::vector<EdgeInput> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j, 0});
  return build_graph(edges, n);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<EdgeInput> edges;
  for (auto [u, v] : a.undirected_edges()) edges.push_back({u, v, 0});
  NodeId shift = a.num_nodes();
  for (auto [u, v] : b.undirected_edges())
    edges.push_back({static_cast<NodeId>(u + shift), static_cast<NodeId>(v + shift), 0});
  return build_graph(edges, static_cast<NodeId>(a.num_nodes() + b.num_nodes()));
}

Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  if (perm.size() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("relabel: permutation size mismatch");
  std::vector<EdgeInput> edges;
  for (auto [u, v] : g.undirected_edges())
    edges.push_back({perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)], 0});
  return build_graph(edges, g.num_nodes());
}

Graph erdos_renyi(NodeId n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi: need n >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: p outside [0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<EdgeInput> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng) < p) edges.push_back({i, j, 0});
  return build_graph(edges, n);
}

Graph random_regular_graph(NodeId n, int r, std::uint64_t seed) {
  if (r < 0 || r >= n) throw std::invalid_argument("random_regular_graph: need 0 <= r < n");
  if ((static_cast<std::int64_t>(n) * r) % 2 != 0)
    throw std::invalid_argument("random_regular_graph: n*r must be even");
  std::mt19937_64 rng(seed);
  std::vector<NodeId> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(r));
  for (NodeId v = 0; v < n; ++v)
    for (int i = 0; i < r; ++i) stubs[static_cast<std::size_t>(v) * r + i] = v;

  // Pairing model: shuffle stubs, pair them up, reject on loop/multi-edge.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<NodeId, NodeId>> seen;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      NodeId a = stubs[i], b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      auto key = std::minmax(a, b);
      if (!seen.insert({key.first, key.second}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<EdgeInput> edges;
    edges.reserve(seen.size());
    for (auto [u, v] : seen) edges.push_back({u, v, 0});
    return build_graph(edges, n);
  }
  throw std::runtime_error("random_regular_graph: pairing rejection did not converge");
}

Graph csl_graph(NodeId n, NodeId skip) {
  if (n < 5) throw std::invalid_argument("csl_graph: need n >= 5");
  if (skip < 2 || skip >= n - 1 || 2 * skip == n || std::gcd(n, skip) != 1)
    throw std::invalid_argument("csl_graph: invalid skip");
  std::vector<EdgeInput> edges;
  for (NodeId i = 0; i < n; ++i) {
    edges.push_back({i, static_cast<NodeId>((i + 1) % n), 0});
    edges.push_back({i, static_cast<NodeId>((i + skip) % n), 0});
  }
  return build_graph(edges, n);
}

Graph shrikhande_graph() {
  // Cayley graph on Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}.
  const std::pair<int, int> conn[] = {{1, 0}, {3, 0}, {0, 1}, {0, 3}, {1, 1}, {3, 3}};
  std::vector<EdgeInput> edges;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (auto [dx, dy] : conn) {
        NodeId a = static_cast<NodeId>(4 * x + y);
        NodeId b = static_cast<NodeId>(4 * ((x + dx) % 4) + (y + dy) % 4);
        if (a < b) edges.push_back({a, b, 0});
      }
  return build_graph(edges, 16);
}

Graph rook4x4_graph() {
  std::vector<EdgeInput> edges;
  auto id = [](int r, int c) { return static_cast<NodeId>(4 * r + c); };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      for (int c2 = c + 1; c2 < 4; ++c2) edges.push_back({id(r, c), id(r, c2), 0});
      for (int r2 = r + 1; r2 < 4; ++r2) edges.push_back({id(r, c), id(r2, c), 0});
    }
  return build_graph(edges, 16);
}

Graph bridge_ring_graph() {
  // Hubs 0..3; bundle sizes alternate 1,3,1,3 so every hub has degree 4.
  std::vector<EdgeInput> edges;
  NodeId next = 4;
  const int bundle[4] = {1, 3, 1, 3};
  for (int i = 0; i < 4; ++i) {
    NodeId a = static_cast<NodeId>(i);
    NodeId b = static_cast<NodeId>((i + 1) % 4);
    for (int j = 0; j < bundle[i]; ++j) {
      edges.push_back({a, next, 0});
      edges.push_back({next, b, 0});
      ++next;
    }
  }
  return build_graph(edges, next);
}

Graph citation_like_graph(NodeId n, int topics, std::uint64_t seed) {
  if (n < 10) throw std::invalid_argument("citation_like_graph: need n >= 10");
  if (topics < 1) throw std::invalid_argument("citation_like_graph: need topics >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<int> topic(static_cast<std::size_t>(n));
  std::vector<std::vector<NodeId>> by_topic(static_cast<std::size_t>(topics));
  std::uniform_int_distribution<int> topic_pick(0, topics - 1);
  for (NodeId v = 0; v < n; ++v) topic[static_cast<std::size_t>(v)] = topic_pick(rng);

  std::vector<std::int64_t> weight(static_cast<std::size_t>(n), 1);  // degree + 1
  std::vector<std::set<NodeId>> adj(static_cast<std::size_t>(n));
  auto add_edge = [&](NodeId a, NodeId b) {
    if (a == b || adj[static_cast<std::size_t>(a)].count(b)) return false;
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
    ++weight[static_cast<std::size_t>(a)];
    ++weight[static_cast<std::size_t>(b)];
    return true;
  };
  auto pick_pref = [&](const std::vector<NodeId>& cands) {
    std::int64_t total = 0;
    for (NodeId c : cands) total += weight[static_cast<std::size_t>(c)];
    std::uniform_int_distribution<std::int64_t> pick(0, total - 1);
    std::int64_t x = pick(rng);
    for (NodeId c : cands) {
      x -= weight[static_cast<std::size_t>(c)];
      if (x < 0) return c;
    }
    return cands.back();
  };

  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    if (!order.empty()) {
      // 1-3 references, biased toward the node's own topic.
      double roll = coin(rng);
      int refs = roll < 0.40 ? 1 : (roll < 0.85 ? 2 : 3);
      for (int i = 0; i < refs; ++i) {
        const auto& same = by_topic[static_cast<std::size_t>(topic[static_cast<std::size_t>(v)])];
        NodeId j = (!same.empty() && coin(rng) < 0.85) ? pick_pref(same) : pick_pref(order);
        add_edge(v, j);
      }
      // Triadic closure: cite a reference of a reference.
      for (int i = 0; i < 2; ++i) {
        if (coin(rng) >= 0.75 || adj[static_cast<std::size_t>(v)].empty()) continue;
        std::vector<NodeId> nb(adj[static_cast<std::size_t>(v)].begin(),
                               adj[static_cast<std::size_t>(v)].end());
        std::uniform_int_distribution<std::size_t> pick_nb(0, nb.size() - 1);
        NodeId w = nb[pick_nb(rng)];
        std::vector<NodeId> second;
        for (NodeId x : adj[static_cast<std::size_t>(w)])
          if (x != v && !adj[static_cast<std::size_t>(v)].count(x)) second.push_back(x);
        if (second.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick_2nd(0, second.size() - 1);
        add_edge(v, second[pick_2nd(rng)]);
      }
    }
    order.push_back(v);
    by_topic[static_cast<std::size_t>(topic[static_cast<std::size_t>(v)])].push_back(v);
  }

  std::vector<EdgeInput> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId w : adj[static_cast<std::size_t>(u)])
      if (u < w) edges.push_back({u, w, 0});
  return build_graph(edges, n);
}

}  // namespace gdgnn
