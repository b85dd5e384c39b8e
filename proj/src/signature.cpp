#include "gdgnn/signature.hpp"

#include <algorithm>
#include <sstream>

#include "gdgnn/geodesic.hpp"

namespace gdgnn {

EdgeConfiguration edge_configurations(const Graph& g, NodeId v, int d_max) {
  if (d_max < 1) throw std::invalid_argument("edge_configurations: d_max must be >= 1");
  DistanceMap dm = bfs_distances(g, v, d_max);
  EdgeConfiguration conf;
  conf.per_radius.assign(static_cast<std::size_t>(d_max), {});
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (s == v || !dm.reachable(s)) continue;
    std::int32_t d = dm[s];
    int into_prev = 0;
    for (NodeId w : g.neighbors(s))
      if (dm.reachable(w) && dm[w] == d - 1) ++into_prev;
    auto& hist = conf.per_radius[static_cast<std::size_t>(d - 1)];
    if (hist.size() < static_cast<std::size_t>(into_prev))
      hist.resize(static_cast<std::size_t>(into_prev), 0);
    ++hist[static_cast<std::size_t>(into_prev - 1)];
  }
  return conf;
}

SignatureVariant parse_signature_variant(const std::string& name) {
  if (name == "vert") return SignatureVariant::kVert;
  if (name == "vertdeg") return SignatureVariant::kVertDeg;
  if (name == "hor") return SignatureVariant::kHor;
  throw DataError("unknown signature variant: " + name + " (expected vert|vertdeg|hor)");
}

std::string to_string(SignatureVariant v) {
  switch (v) {
    case SignatureVariant::kVert: return "vert";
    case SignatureVariant::kVertDeg: return "vertdeg";
    case SignatureVariant::kHor: return "hor";
  }
  return "?";
}

CanonicalSignature::NodeSignature node_signature(const Graph& g, NodeId v, int d_max,
                                                 SignatureVariant variant) {
  if (d_max < 1) throw std::invalid_argument("node_signature: d_max must be >= 1");
  DistanceMap dm = bfs_distances(g, v, d_max);
  CanonicalSignature::NodeSignature sig(static_cast<std::size_t>(d_max));
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (s == v || !dm.reachable(s)) continue;
    std::int32_t d = dm[s];
    CanonicalSignature::Payload payload;
    switch (variant) {
      case SignatureVariant::kHor:
        payload = {1};
        break;
      case SignatureVariant::kVert: {
        auto side = vertical_geodesic_one_side(g, v, s, dm);
        payload = {static_cast<std::int32_t>(side.size())};
        break;
      }
      case SignatureVariant::kVertDeg: {
        auto side = vertical_geodesic_one_side(g, v, s, dm);
        payload.push_back(static_cast<std::int32_t>(side.size()));
        auto degs = induced_degrees(g, side);
        std::vector<std::int32_t> sorted_degs;
        sorted_degs.reserve(degs.size());
        for (auto& [node, deg] : degs) sorted_degs.push_back(deg);
        std::sort(sorted_degs.begin(), sorted_degs.end());
        payload.insert(payload.end(), sorted_degs.begin(), sorted_degs.end());
        break;
      }
    }
    sig[static_cast<std::size_t>(d - 1)].push_back(std::move(payload));
  }
  for (auto& bin : sig) std::sort(bin.begin(), bin.end());
  return sig;
}

CanonicalSignature canonical_signature(const Graph& g, int d_max, SignatureVariant variant) {
  CanonicalSignature out;
  out.nodes.reserve(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    out.nodes.push_back(node_signature(g, v, d_max, variant));
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

bool distinguish_pair(const Graph& g1, const Graph& g2, int d_max, SignatureVariant variant) {
  return canonical_signature(g1, d_max, variant) != canonical_signature(g2, d_max, variant);
}

std::string to_text(const CanonicalSignature& sig) {
  std::ostringstream out;
  for (const auto& node : sig.nodes) {
    for (std::size_t d = 0; d < node.size(); ++d) {
      if (d > 0) out << " | ";
      out << "d" << (d + 1) << ":";
      for (const auto& payload : node[d]) {
        out << " (";
        for (std::size_t i = 0; i < payload.size(); ++i) {
          if (i > 0) out << ',';
          out << payload[i];
        }
        out << ')';
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace gdgnn
