#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gdgnn/generators.hpp"
#include "gdgnn/graph.hpp"
#include "gdgnn/graph_io.hpp"
#include "oracles.hpp"

using namespace gdgnn;

TEST_CASE("build_graph canonicalizes") {
  SUBCASE("triangle: every node degree 2") {
    Graph g = build_graph({{0, 1, 0}, {1, 2, 0}, {0, 2, 0}}, 3);
    for (NodeId v = 0; v < 3; ++v) CHECK(g.degree(v) == 2);
    CHECK(g.num_undirected_edges() == 3);
  }
  SUBCASE("duplicate edge stored once") {
    Graph g = build_graph({{0, 1, 0}, {0, 1, 0}}, 2);
    CHECK(g.num_undirected_edges() == 1);
    CHECK(g.degree(0) == 1);
  }
  SUBCASE("self-loops dropped") {
    Graph g = build_graph({{0, 0, 0}, {0, 1, 0}}, 2);
    CHECK(g.num_undirected_edges() == 1);
  }
  SUBCASE("undirected stores both directions, slices sorted") {
    Graph g = build_graph({{2, 0, 0}, {2, 1, 0}}, 3);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));
    auto nb = g.neighbors(2);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_graph({{0, 5, 0}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_graph({}, 0), std::invalid_argument);
  }
  SUBCASE("6-cycle fixture") {
    Graph g = cycle_graph(6);
    for (NodeId v = 0; v < 6; ++v) CHECK(g.degree(v) == 2);
    CHECK(g.has_edge(0, 5));
    CHECK(g.has_edge(0, 1));
  }
}

TEST_CASE("degree sum identity on random graphs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = erdos_renyi(20, 0.2, seed);
    std::int64_t sum = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      CHECK(g.degree(v) ==
            static_cast<NodeId>(g.offsets()[static_cast<std::size_t>(v) + 1] -
                                g.offsets()[static_cast<std::size_t>(v)]));
      sum += g.degree(v);
    }
    CHECK(sum == 2 * g.num_undirected_edges());
  }
}

TEST_CASE("k_hop_neighborhood") {
  Graph g = cycle_graph(6);
  SUBCASE("direct neighbors") {
    CHECK(k_hop_neighborhood(g, 0, 1) == std::vector<NodeId>{1, 5});
  }
  SUBCASE("cycle diameter 3 reaches everything") {
    CHECK(k_hop_neighborhood(g, 0, 3) == std::vector<NodeId>{1, 2, 3, 4, 5});
  }
  SUBCASE("k = 0 is empty") { CHECK(k_hop_neighborhood(g, 0, 0).empty()); }

  SUBCASE("matches BFS enumeration oracle on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Graph r = erdos_renyi(12, 0.25, 100 + seed);
      auto d = oracle::floyd_warshall(r);
      for (NodeId v = 0; v < r.num_nodes(); ++v)
        for (int k = 0; k <= 4; ++k) {
          std::vector<NodeId> expect;
          for (NodeId w = 0; w < r.num_nodes(); ++w)
            if (w != v && d[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] <= k)
              expect.push_back(w);
          CHECK(k_hop_neighborhood(r, v, k) == expect);
        }
    }
  }

  SUBCASE("monotone in k and stabilizes at the component") {
    Graph r = disjoint_union(cycle_graph(5), path_graph(4));
    for (NodeId v = 0; v < r.num_nodes(); ++v) {
      std::vector<NodeId> prev;
      for (int k = 0; k <= 9; ++k) {
        auto cur = k_hop_neighborhood(r, v, k);
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
      }
      auto comp = k_hop_neighborhood(r, v, r.num_nodes());
      CHECK(prev == comp);
    }
  }
}

TEST_CASE("induced_degrees") {
  SUBCASE("empty set") {
    Graph g = cycle_graph(4);
    CHECK(induced_degrees(g, {}).empty());
  }
  SUBCASE("whole vertex set reproduces degrees") {
    Graph g = erdos_renyi(15, 0.3, 7);
    std::vector<NodeId> all;
    for (NodeId v = 0; v < g.num_nodes(); ++v) all.push_back(v);
    auto deg = induced_degrees(g, all);
    for (NodeId v = 0; v < g.num_nodes(); ++v) CHECK(deg.at(v) == g.degree(v));
  }
  SUBCASE("random subsets match brute-force scan") {
    auto rng = oracle::rng(42);
    for (int rep = 0; rep < 20; ++rep) {
      Graph g = erdos_renyi(12, 0.3, 200 + static_cast<std::uint64_t>(rep));
      std::vector<NodeId> subset;
      for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (rng() % 2 == 0) subset.push_back(v);
      auto got = induced_degrees(g, subset);
      auto expect = oracle::induced_degrees_brute(g, subset);
      CHECK(got.size() == expect.size());
      for (auto& [v, d] : expect) CHECK(got.at(v) == d);
    }
  }
}

TEST_CASE("edge-list io") {
  SUBCASE("round trip with labels and header") {
    std::istringstream in("#nodes=5\n0\t1\t3\n1\t2\n3\t4\t7\n");
    Graph g = parse_edge_list(in, true, "test");
    CHECK(g.num_nodes() == 5);
    CHECK(g.num_undirected_edges() == 3);
    CHECK(g.has_edge_labels());
    // labels must not be rejected and must ride along both directions
    auto labels0 = g.edge_labels(0);
    CHECK(labels0[0] == 3);
  }
  SUBCASE("node count inferred from max id") {
    std::istringstream in("0\t1\n1\t4\n");
    Graph g = parse_edge_list(in, true, "test");
    CHECK(g.num_nodes() == 5);
  }
  SUBCASE("bad lines rejected") {
    std::istringstream in("0\n");
    CHECK_THROWS_AS(parse_edge_list(in, true, "test"), DataError);
    std::istringstream in2("0\t-2\n");
    CHECK_THROWS_AS(parse_edge_list(in2, true, "test"), DataError);
    CHECK_THROWS_AS(load_edge_list("/nonexistent/file.tsv"), DataError);
  }
  SUBCASE("file round trip") {
    Graph g = csl_graph(11, 3);
    save_edge_list(g, "io_roundtrip.tsv");
    Graph h = load_edge_list("io_roundtrip.tsv");
    CHECK(h.num_nodes() == g.num_nodes());
    CHECK(h.neighbor_list() == g.neighbor_list());
    CHECK(h.offsets() == g.offsets());
  }
}

TEST_CASE("collection io") {
  std::istringstream in("3 1 3 0 1 1 2 0 2\n4 0 4 0 1 1 2 2 3 3 0\n");
  GraphCollection c = parse_collection(in, "test");
  REQUIRE(c.graphs.size() == 2);
  CHECK(c.labels == std::vector<std::int32_t>{1, 0});
  CHECK(c.graphs[0].num_undirected_edges() == 3);
  CHECK(c.graphs[1].num_undirected_edges() == 4);

  save_collection(c, "coll_roundtrip.txt");
  GraphCollection d = load_collection("coll_roundtrip.txt");
  CHECK(d.labels == c.labels);
  CHECK(d.graphs[1].neighbor_list() == c.graphs[1].neighbor_list());

  std::istringstream bad("3 1 5 0 1\n");
  CHECK_THROWS_AS(parse_collection(bad, "test"), DataError);
}
