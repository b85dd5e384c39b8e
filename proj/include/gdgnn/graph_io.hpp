#pragma once

#include <iosfwd>
#include <string>

#include "gdgnn/graph.hpp"

namespace gdgnn {

// Edge-list text format: one edge per line, `u<TAB>v[<TAB>label]`, 0-based
// ids. An optional `#nodes=N` line pins the node count; otherwise
// N = max id + 1. Other lines starting with '#' are comments. Whitespace
// other than tabs is tolerated between fields.
Graph load_edge_list(const std::string& path, bool undirected = true);
Graph parse_edge_list(std::istream& in, bool undirected, const std::string& origin);
void save_edge_list(const Graph& g, const std::string& path);

// Graph collection: one record per line,
//   `n label m u1 v1 u2 v2 ... um vm`
// with n = node count, label = integer graph label, m = undirected edge count.
GraphCollection load_collection(const std::string& path);
GraphCollection parse_collection(std::istream& in, const std::string& origin);
void save_collection(const GraphCollection& c, const std::string& path);

}  // namespace gdgnn
