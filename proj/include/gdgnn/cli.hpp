#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gdgnn/graph.hpp"

namespace gdgnn {

// Runs one CLI invocation (args exclude the program name). Exit status:
// 0 success, 1 usage error, 2 data error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Resolves a graph argument: an edge-list file path, or a builtin spec such
// as cycle:6, path:4, complete:5, cycles:3:4, csl:41:2, regular:50:3:7,
// er:100:0.05:7, citation:2708:70:12345, shrikhande, rook, bridge-ring.
Graph resolve_graph_arg(const std::string& spec);

// `node<TAB>label` lines; unlisted nodes get label -1.
std::vector<std::int32_t> load_node_labels(const std::string& path, NodeId num_nodes);

}  // namespace gdgnn
