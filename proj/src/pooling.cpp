#include "gdgnn/pooling.hpp"

#include <algorithm>

namespace gdgnn {

PoolVariant parse_pool_variant(const std::string& name) {
  if (name == "horizontal" || name == "hor") return PoolVariant::kHorizontal;
  if (name == "vertical" || name == "vert") return PoolVariant::kVertical;
  if (name == "vertdeg" || name == "vertical-deg") return PoolVariant::kVerticalDeg;
  if (name == "distonly" || name == "dist") return PoolVariant::kDistOnly;
  if (name == "neighboronly" || name == "nei") return PoolVariant::kNeighborOnly;
  throw DataError("unknown pooling variant: " + name +
                  " (expected horizontal|vertical|vertdeg|distonly|neighboronly)");
}

std::string to_string(PoolVariant v) {
  switch (v) {
    case PoolVariant::kHorizontal: return "horizontal";
    case PoolVariant::kVertical: return "vertical";
    case PoolVariant::kVerticalDeg: return "vertdeg";
    case PoolVariant::kDistOnly: return "distonly";
    case PoolVariant::kNeighborOnly: return "neighboronly";
  }
  return "?";
}

bool PoolConfig::has_distance_channel() const {
  switch (variant) {
    case PoolVariant::kHorizontal: return horizontal_distance;
    case PoolVariant::kVertical:
    case PoolVariant::kVerticalDeg:
    case PoolVariant::kDistOnly: return true;
    case PoolVariant::kNeighborOnly: return false;
  }
  return false;
}

int PoolConfig::pair_dim(int emb_dim) const {
  int pooled = 0;
  switch (variant) {
    case PoolVariant::kHorizontal:
    case PoolVariant::kVertical:
    case PoolVariant::kNeighborOnly: pooled = emb_dim; break;
    case PoolVariant::kVerticalDeg: pooled = emb_dim + 1; break;
    case PoolVariant::kDistOnly: pooled = 0; break;
  }
  return pooled + (has_distance_channel() ? distance_bins() : 0);
}

void PoolConfig::validate() const {
  if (d_max < 1) throw std::invalid_argument("PoolConfig: d_max must be >= 1");
  if (node_k < 0 || node_k > d_max)
    throw std::invalid_argument("PoolConfig: node_k must be in [0, d_max]");
}

const DistanceMap& DistanceCache::get(NodeId v) {
  auto it = maps_.find(v);
  if (it == maps_.end()) it = maps_.emplace(v, bfs_distances(g_, v, d_max_)).first;
  return it->second;
}

PairGeodesic extract_pair_geodesic(const Graph& g, NodeId u, NodeId v, DistanceCache& cache,
                                   const PoolConfig& cfg, RunLedger* ledger,
                                   bool mask_direct_edge) {
  cfg.validate();
  if (ledger) ++ledger->geodesic_extractions;
  PairGeodesic pair;
  pair.u = u;
  pair.v = v;

  if (u == v) {  // degenerate pair: empty geodesic, distance 0
    pair.within_cutoff = true;
    pair.distance = 0;
    return pair;
  }

  if (cfg.variant == PoolVariant::kNeighborOnly) {
    pair.within_cutoff = true;
    pair.distance = 0;
    pair.members = {u, v};
    return pair;
  }

  const bool masked = mask_direct_edge && g.has_edge(u, v);
  std::optional<DistanceMap> local_u, local_v;
  if (masked) {
    std::pair<NodeId, NodeId> e{u, v};
    local_v = bfs_distances(g, v, cfg.d_max, e);
    if (cfg.variant == PoolVariant::kVertical || cfg.variant == PoolVariant::kVerticalDeg)
      local_u = bfs_distances(g, u, cfg.d_max, e);
  }
  const DistanceMap& dmap_v = masked ? *local_v : cache.get(v);
  if (!dmap_v.reachable(u)) return pair;  // beyond cutoff sentinel
  pair.within_cutoff = true;
  pair.distance = dmap_v[u];

  switch (cfg.variant) {
    case PoolVariant::kDistOnly:
      break;
    case PoolVariant::kHorizontal: {
      // With a masked map the walk can never step through the hidden edge:
      // dist_v[v] = 0 only matches at distance 1, which masking rules out.
      auto path = horizontal_geodesic(g, u, v, dmap_v, cfg.tie_policy);
      pair.members = path->path;
      break;
    }
    case PoolVariant::kVertical:
    case PoolVariant::kVerticalDeg: {
      const DistanceMap& dmap_u = masked ? *local_u : cache.get(u);
      std::vector<NodeId> joint;
      for (NodeId w : g.neighbors(u)) {
        if (masked && w == v) continue;
        if (dmap_u.reachable(w) && dmap_v.reachable(w) && dmap_u[w] + dmap_v[w] == pair.distance)
          joint.push_back(w);
      }
      for (NodeId w : g.neighbors(v)) {
        if (masked && w == u) continue;
        if (dmap_u.reachable(w) && dmap_v.reachable(w) && dmap_u[w] + dmap_v[w] == pair.distance)
          joint.push_back(w);
      }
      std::sort(joint.begin(), joint.end());
      joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
      pair.members = std::move(joint);
      if (cfg.variant == PoolVariant::kVerticalDeg) {
        auto degs = induced_degrees(g, pair.members);
        pair.member_degrees.reserve(pair.members.size());
        for (NodeId w : pair.members)
          pair.member_degrees.push_back(static_cast<double>(degs.at(w)));
      }
      break;
    }
    case PoolVariant::kNeighborOnly:
      break;  // handled above
  }
  return pair;
}

PairGeodesic extract_one_sided_geodesic(const Graph& g, NodeId v, NodeId s,
                                        const DistanceMap& dmap_v, const PoolConfig& cfg,
                                        RunLedger* ledger) {
  cfg.validate();
  if (cfg.variant == PoolVariant::kHorizontal)
    throw std::invalid_argument("node-level pooling does not define a horizontal variant");
  if (ledger) ++ledger->geodesic_extractions;
  PairGeodesic pair;
  pair.u = v;
  pair.v = s;
  pair.within_cutoff = true;
  pair.distance = dmap_v[s];

  switch (cfg.variant) {
    case PoolVariant::kDistOnly:
      break;
    case PoolVariant::kNeighborOnly:
      pair.members = {s};
      pair.distance = 0;
      break;
    case PoolVariant::kVertical:
    case PoolVariant::kVerticalDeg: {
      pair.members = vertical_geodesic_one_side(g, v, s, dmap_v);
      if (cfg.variant == PoolVariant::kVerticalDeg) {
        auto degs = induced_degrees(g, pair.members);
        pair.member_degrees.reserve(pair.members.size());
        for (NodeId w : pair.members)
          pair.member_degrees.push_back(static_cast<double>(degs.at(w)));
      }
      break;
    }
    case PoolVariant::kHorizontal:
      break;  // rejected above
  }
  return pair;
}

Tape::ValueId pool_pair(Tape& tape, Tape::ValueId embeddings, const PairGeodesic& pair,
                        const PoolConfig& cfg) {
  const int emb_dim = static_cast<int>(tape.value(embeddings).cols());
  const bool distance_channel = cfg.has_distance_channel();

  int pooled_dim = cfg.pair_dim(emb_dim) - (distance_channel ? cfg.distance_bins() : 0);

  Tape::ValueId pooled = -1;
  if (pooled_dim > 0) {
    if (pair.within_cutoff && !pair.members.empty()) {
      Tape::ValueId rows = tape.row_gather(embeddings, pair.members);
      if (cfg.has_degree_channel()) {
        Matrix deg(pair.members.size(), 1);
        for (std::size_t i = 0; i < pair.member_degrees.size(); ++i)
          deg(i, 0) = pair.member_degrees[i];
        rows = tape.concat_cols(rows, tape.constant(std::move(deg)));
      }
      pooled = tape.reduce_rows(rows, cfg.reducer);
    } else {
      pooled = tape.constant(Matrix(1, static_cast<std::size_t>(pooled_dim)));
    }
  }

  if (distance_channel) {
    Matrix onehot(1, static_cast<std::size_t>(cfg.distance_bins()));
    const int bucket = pair.within_cutoff ? pair.distance : cfg.d_max + 1;
    onehot(0, static_cast<std::size_t>(bucket)) = 1.0;
    Tape::ValueId oh = tape.constant(std::move(onehot));
    pooled = pooled >= 0 ? tape.concat_cols(pooled, oh) : oh;
  }
  return pooled;
}

Tape::ValueId pool_horizontal(Tape& tape, Tape::ValueId embeddings,
                              const std::optional<HorizontalGeodesic>& path, NodeId u, NodeId v,
                              const PoolConfig& cfg) {
  if (cfg.variant != PoolVariant::kHorizontal)
    throw std::invalid_argument("pool_horizontal: config variant is not horizontal");
  PairGeodesic pair;
  pair.u = u;
  pair.v = v;
  if (path) {
    pair.within_cutoff = true;
    pair.distance = path->distance();
    pair.members = path->path;
  }
  return pool_pair(tape, embeddings, pair, cfg);
}

Tape::ValueId pool_vertical(Tape& tape, Tape::ValueId embeddings,
                            const std::optional<VerticalGeodesic>& gd, NodeId u, NodeId v,
                            const PoolConfig& cfg) {
  if (cfg.variant != PoolVariant::kVertical && cfg.variant != PoolVariant::kVerticalDeg)
    throw std::invalid_argument("pool_vertical: config variant is not vertical");
  PairGeodesic pair;
  pair.u = u;
  pair.v = v;
  if (gd) {
    pair.within_cutoff = true;
    pair.distance = gd->distance;
    std::vector<NodeId> joint = gd->near_u;
    joint.insert(joint.end(), gd->near_v.begin(), gd->near_v.end());
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    pair.members = std::move(joint);
    if (cfg.variant == PoolVariant::kVerticalDeg)
      for (NodeId w : pair.members)
        pair.member_degrees.push_back(static_cast<double>(gd->degrees.at(w)));
  }
  return pool_pair(tape, embeddings, pair, cfg);
}

Tape::ValueId node_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings, NodeId v,
                                  const PoolConfig& cfg, RunLedger* ledger) {
  cfg.validate();
  if (cfg.variant == PoolVariant::kHorizontal)
    throw std::invalid_argument("node-level pooling does not define a horizontal variant");
  const int emb_dim = static_cast<int>(tape.value(embeddings).cols());
  Tape::ValueId own = tape.row_gather(embeddings, {v});

  DistanceMap dmap_v = bfs_distances(g, v, cfg.effective_node_k());
  std::vector<Tape::ValueId> parts;
  for (NodeId s : k_hop_neighborhood(g, v, cfg.effective_node_k())) {
    PairGeodesic pair = extract_one_sided_geodesic(g, v, s, dmap_v, cfg, ledger);
    parts.push_back(pool_pair(tape, embeddings, pair, cfg));
  }
  Tape::ValueId reduced;
  if (parts.empty()) {
    reduced = tape.constant(Matrix(1, static_cast<std::size_t>(cfg.pair_dim(emb_dim))));
  } else {
    reduced = tape.reduce_rows(tape.stack_rows(std::move(parts)), cfg.node_reducer);
  }
  return tape.concat_cols(own, reduced);
}

Tape::ValueId edge_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings, NodeId u,
                                  NodeId v, DistanceCache& cache, const PoolConfig& cfg,
                                  RunLedger* ledger) {
  cfg.validate();
  PairGeodesic pair = extract_pair_geodesic(g, u, v, cache, cfg, ledger);
  return edge_representation_from_pair(tape, embeddings, pair, cfg);
}

Tape::ValueId edge_representation_from_pair(Tape& tape, Tape::ValueId embeddings,
                                            const PairGeodesic& pair, const PoolConfig& cfg) {
  Tape::ValueId endpoints = tape.row_gather(embeddings, {pair.u});
  endpoints = tape.concat_cols(endpoints, tape.row_gather(embeddings, {pair.v}));
  return tape.concat_cols(endpoints, pool_pair(tape, embeddings, pair, cfg));
}

Tape::ValueId graph_representation(Tape& tape, const Graph& g, Tape::ValueId embeddings,
                                   const PoolConfig& cfg, RunLedger* ledger) {
  cfg.validate();
  if (g.num_nodes() < 1) throw std::invalid_argument("graph_representation: empty graph");
  std::vector<Tape::ValueId> parts;
  parts.reserve(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    parts.push_back(node_representation(tape, g, embeddings, v, cfg, ledger));
  return tape.reduce_rows(tape.stack_rows(std::move(parts)), cfg.graph_reducer);
}

}  // namespace gdgnn
