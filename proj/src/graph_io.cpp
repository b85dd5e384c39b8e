#include "gdgnn/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gdgnn {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

}  // namespace

Graph parse_edge_list(std::istream& in, bool undirected, const std::string& origin) {
  std::vector<EdgeInput> edges;
  NodeId declared_nodes = -1;
  NodeId max_id = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#nodes=", 0) == 0) {
        try {
          declared_nodes = static_cast<NodeId>(std::stol(line.substr(7)));
        } catch (const std::exception&) {
          throw DataError(origin + ":" + std::to_string(lineno) + ": bad #nodes header");
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long u, v, label = 0;
    if (!(ls >> u >> v))
      throw DataError(origin + ":" + std::to_string(lineno) + ": expected `u<TAB>v[<TAB>label]`");
    ls >> label;  // optional third field
    if (u < 0 || v < 0)
      throw DataError(origin + ":" + std::to_string(lineno) + ": negative node id");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<EdgeLabel>(label)});
    max_id = std::max({max_id, static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  NodeId n = declared_nodes >= 0 ? declared_nodes : max_id + 1;
  if (n <= 0) throw DataError(origin + ": empty graph (no nodes)");
  if (max_id >= n) throw DataError(origin + ": edge endpoint exceeds declared node count");
  return build_graph(edges, n, undirected);
}

Graph load_edge_list(const std::string& path, bool undirected) {
  auto in = open_or_throw(path);
  return parse_edge_list(in, undirected, path);
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "#nodes=" << g.num_nodes() << "\n";
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto nb = g.neighbors(u);
    auto labels = g.has_edge_labels() ? g.edge_labels(u) : std::span<const EdgeLabel>{};
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (u >= nb[i]) continue;
      out << u << '\t' << nb[i];
      if (!labels.empty()) out << '\t' << labels[i];
      out << '\n';
    }
  }
}

GraphCollection parse_collection(std::istream& in, const std::string& origin) {
  GraphCollection c;
  std::string line;
  std::size_t lineno = 0;
  bool any_label = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long n, label, m;
    if (!(ls >> n >> label >> m))
      throw DataError(origin + ":" + std::to_string(lineno) + ": expected `n label m u1 v1 ...`");
    if (n <= 0 || m < 0)
      throw DataError(origin + ":" + std::to_string(lineno) + ": bad counts");
    std::vector<EdgeInput> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
      long u, v;
      if (!(ls >> u >> v))
        throw DataError(origin + ":" + std::to_string(lineno) + ": truncated edge list");
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 0});
    }
    c.graphs.push_back(build_graph(edges, static_cast<NodeId>(n), /*undirected=*/true));
    c.labels.push_back(static_cast<std::int32_t>(label));
    any_label = any_label || label != 0;
  }
  if (c.graphs.empty()) throw DataError(origin + ": empty collection");
  return c;
}

GraphCollection load_collection(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_collection(in, path);
}

void save_collection(const GraphCollection& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (std::size_t i = 0; i < c.graphs.size(); ++i) {
    const Graph& g = c.graphs[i];
    auto edges = g.undirected_edges();
    out << g.num_nodes() << ' ' << (c.has_labels() ? c.labels[i] : 0) << ' ' << edges.size();
    for (auto [u, v] : edges) out << ' ' << u << ' ' << v;
    out << '\n';
  }
}

}  // namespace gdgnn
