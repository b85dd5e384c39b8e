#include "gdgnn/wl.hpp"

#include <algorithm>
#include <map>

namespace gdgnn {

int ColorPartition::num_classes() const {
  if (colors.empty()) return 0;
  return 1 + *std::max_element(colors.begin(), colors.end());
}

ColorPartition wl_refine(const Graph& g, int max_rounds) {
  if (max_rounds < 1) throw std::invalid_argument("wl_refine: max_rounds must be >= 1");
  const std::size_t n = static_cast<std::size_t>(g.num_nodes());
  ColorPartition p;
  p.colors.assign(n, 0);

  using Signature = std::pair<std::int32_t, std::vector<std::int32_t>>;
  std::vector<Signature> sigs(n);
  for (int round = 1; round <= max_rounds; ++round) {
    for (std::size_t v = 0; v < n; ++v) {
      auto& [own, nb] = sigs[v];
      own = p.colors[v];
      nb.clear();
      for (NodeId w : g.neighbors(static_cast<NodeId>(v)))
        nb.push_back(p.colors[static_cast<std::size_t>(w)]);
      std::sort(nb.begin(), nb.end());
    }
    std::map<Signature, std::int32_t> relabel;
    for (const auto& s : sigs) relabel.emplace(s, 0);
    std::int32_t next = 0;
    for (auto& [sig, id] : relabel) id = next++;

    bool changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      std::int32_t c = relabel.at(sigs[v]);
      if (c != p.colors[v]) changed = true;
      p.colors[v] = c;
    }
    p.rounds_to_stabilize = round;
    if (!changed) break;
  }
  return p;
}

}  // namespace gdgnn
