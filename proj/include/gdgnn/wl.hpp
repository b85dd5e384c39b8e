#pragma once

#include <cstdint>
#include <vector>

#include "gdgnn/graph.hpp"

namespace gdgnn {

// Stable 1-WL coloring. Color ids are canonical: they are assigned in sorted
// order of the (old color, sorted neighbor-color multiset) signatures each
// round, so two isomorphic graphs get identical color vectors up to the node
// relabeling.
struct ColorPartition {
  std::vector<std::int32_t> colors;
  int rounds_to_stabilize = 0;

  int num_classes() const;
};

ColorPartition wl_refine(const Graph& g, int max_rounds = 64);

}  // namespace gdgnn
