#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdgnn/graph.hpp"

namespace gdgnn {

// Per-radius histograms around a node: entry [k][i] counts the nodes at
// distance k+1 that have exactly i+1 edges into the distance-k layer.
struct EdgeConfiguration {
  std::vector<std::vector<std::int64_t>> per_radius;

  bool operator==(const EdgeConfiguration&) const = default;
};

EdgeConfiguration edge_configurations(const Graph& g, NodeId v, int d_max);

enum class SignatureVariant { kVert, kVertDeg, kHor };

SignatureVariant parse_signature_variant(const std::string& name);
std::string to_string(SignatureVariant v);

// Training-free per-graph fingerprint: unit embeddings, sum pooling, and
// per-node distance-sorted bin counts over one-sided geodesics. All exact
// integer arithmetic, so equality decides distinguishability.
//
// A node signature holds, for each distance d in 1..d_max, the sorted list
// of payloads over the nodes s at distance d:
//   kVert:    payload = [|one-sided geodesic set of (v,s)|]
//   kVertDeg: payload = [size, sorted induced degrees of that set...]
//   kHor:     payload = [1]  (only the per-distance counts remain)
// The graph signature is the sorted multiset of node signatures.
struct CanonicalSignature {
  using Payload = std::vector<std::int32_t>;
  using DistanceBin = std::vector<Payload>;          // sorted
  using NodeSignature = std::vector<DistanceBin>;    // index d-1

  std::vector<NodeSignature> nodes;  // sorted

  bool operator==(const CanonicalSignature&) const = default;
  bool operator!=(const CanonicalSignature&) const = default;
};

CanonicalSignature::NodeSignature node_signature(const Graph& g, NodeId v, int d_max,
                                                 SignatureVariant variant);
CanonicalSignature canonical_signature(const Graph& g, int d_max, SignatureVariant variant);

bool distinguish_pair(const Graph& g1, const Graph& g2, int d_max, SignatureVariant variant);

// Stable text rendering, one node signature per line; identical strings iff
// identical signatures.
std::string to_text(const CanonicalSignature& sig);

}  // namespace gdgnn
