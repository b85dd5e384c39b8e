#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gdgnn/cli.hpp"
#include "gdgnn/graph_io.hpp"

using namespace gdgnn;

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(std::move(args), out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).status == 1);
  CHECK(cli({"frobnicate"}).status == 1);
  CHECK(cli({"wl"}).status == 1);  // missing graph argument
  CliResult r = cli({"nonsense"});
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("data errors exit 2") {
  CHECK(cli({"wl", "/no/such/file.tsv"}).status == 2);
  CHECK(cli({"signature", "cycle:6", "--variant", "bogus"}).status == 2);
  CHECK(cli({"geodesic", "cycle:6", "--pair", "0", "99"}).status == 2);
}

TEST_CASE("wl on the two-component demo graph prints one color class") {
  CliResult r = cli({"wl", "cycles:3:4"});
  CHECK(r.status == 0);
  CHECK(r.out.find("nodes=7 classes=1") == 0);
}

TEST_CASE("geodesic on the 6-cycle") {
  CliResult r = cli({"geodesic", "cycle:6", "--pair", "0", "3"});
  CHECK(r.status == 0);
  CHECK(r.out == "distance\t3\npath\t0 1 2 3\n");

  CliResult v = cli({"geodesic", "cycle:6", "--pair", "0", "3", "--variant", "vertical"});
  CHECK(v.status == 0);
  CHECK(v.out.find("distance\t3") == 0);
  CHECK(v.out.find("near_u\t1 5") != std::string::npos);

  CliResult far = cli({"geodesic", "cycles:3:3", "--pair", "0", "4"});
  CHECK(far.status == 0);
  CHECK(far.out == "distance\tinf\n");
}

TEST_CASE("distinguish shrikhande vs rook") {
  CliResult vert = cli({"distinguish", "shrikhande", "rook", "--variant", "vert", "--dmax", "3"});
  CHECK(vert.status == 0);
  CHECK(vert.out == "0\tvert\t0\n");
  CliResult deg = cli({"distinguish", "shrikhande", "rook", "--variant", "vertdeg", "--dmax", "3"});
  CHECK(deg.status == 0);
  CHECK(deg.out == "0\tvertdeg\t1\n");
}

TEST_CASE("gen writes loadable files and stdout is byte-deterministic") {
  CHECK(cli({"gen", "--kind", "csl:11:3", "--out", "cli_csl.tsv"}).status == 0);
  Graph g = load_edge_list("cli_csl.tsv");
  CHECK(g.num_nodes() == 11);
  CHECK(g.num_undirected_edges() == 22);

  CliResult a = cli({"signature", "cli_csl.tsv", "--dmax", "3"});
  CliResult b = cli({"signature", "cli_csl.tsv", "--dmax", "3"});
  CHECK(a.status == 0);
  CHECK(a.out == b.out);

  CHECK(cli({"gen", "--kind", "csl10:41", "--out", "cli_csl10.txt"}).status == 0);
  GraphCollection coll = load_collection("cli_csl10.txt");
  CHECK(coll.graphs.size() == 10);
}

TEST_CASE("distinguish over a collection emits one line per pair") {
  REQUIRE(cli({"gen", "--kind", "csl10:41", "--out", "cli_csl10b.txt"}).status == 0);
  CliResult r = cli({"distinguish", "--collection", "cli_csl10b.txt", "--dmax", "4"});
  CHECK(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(line.find("\tvert\t") != std::string::npos);
  }
  CHECK(count == 45);
}

TEST_CASE("train and eval round trip through the cli") {
  REQUIRE(cli({"gen", "--kind", "citation:220:8:17", "--out", "cli_graph.tsv"}).status == 0);
  std::ofstream cfg("cli_train.cfg");
  cfg << "task=link\nlayers=2\nhidden=8\nepochs=2\nbatch_size=32\nseed=5\nhits_k=10\n";
  cfg.close();
  CliResult t = cli({"train", "--graph", "cli_graph.tsv", "--config", "cli_train.cfg",
                     "--metrics-out", "cli_metrics.csv", "--model-out", "cli_model.ckpt"});
  CHECK(t.status == 0);
  CHECK(t.out.find("auc\t") != std::string::npos);
  CHECK(t.out.find("gnn_forwards\t") != std::string::npos);

  std::ifstream metrics("cli_metrics.csv");
  std::string header;
  std::getline(metrics, header);
  CHECK(header == "epoch,split,metric,value");

  CliResult e = cli({"eval", "--model", "cli_model.ckpt", "--graph", "cli_graph.tsv"});
  CHECK(e.status == 0);
  CHECK(e.out.find("auc\t") != std::string::npos);

  // flag overrides beat the config file
  CliResult t2 = cli({"train", "--graph", "cli_graph.tsv", "--config", "cli_train.cfg",
                      "--epochs", "1"});
  CHECK(t2.status == 0);
}

TEST_CASE("bench csv comes out well-formed") {
  CliResult r = cli({"bench", "--graph", "er:300:0.01:3", "--queries", "20", "--method", "both",
                     "--dmax", "2", "--layers", "2", "--hidden", "8"});
  CHECK(r.status == 0);
  std::istringstream lines(r.out);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "method,queries,gnn_forwards,geodesic_extractions,seconds_phase,seconds_total");
  CHECK(row1.rfind("gdgnn,20,1,20,", 0) == 0);
  CHECK(row2.rfind("subgraph-baseline,20,20,0,", 0) == 0);
}
