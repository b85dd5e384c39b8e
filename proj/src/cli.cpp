#include "gdgnn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdgnn/bench.hpp"
#include "gdgnn/config.hpp"
#include "gdgnn/generators.hpp"
#include "gdgnn/geodesic.hpp"
#include "gdgnn/gnn.hpp"
#include "gdgnn/graph_io.hpp"
#include "gdgnn/metrics.hpp"
#include "gdgnn/signature.hpp"
#include "gdgnn/trainer.hpp"
#include "gdgnn/wl.hpp"

namespace gdgnn {

namespace {

std::vector<std::string> split_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  return parts;
}

long spec_int(const std::vector<std::string>& parts, std::size_t i, const std::string& spec) {
  if (i >= parts.size()) throw DataError("graph spec `" + spec + "`: missing argument");
  try {
    return std::stol(parts[i]);
  } catch (const std::exception&) {
    throw DataError("graph spec `" + spec + "`: bad integer `" + parts[i] + "`");
  }
}

double spec_num(const std::vector<std::string>& parts, std::size_t i, const std::string& spec) {
  if (i >= parts.size()) throw DataError("graph spec `" + spec + "`: missing argument");
  try {
    return std::stod(parts[i]);
  } catch (const std::exception&) {
    throw DataError("graph spec `" + spec + "`: bad number `" + parts[i] + "`");
  }
}

}  // namespace

Graph resolve_graph_arg(const std::string& spec) {
  if (std::filesystem::exists(spec)) return load_edge_list(spec);
  auto parts = split_spec(spec);
  const std::string& kind = parts[0];
  if (kind == "cycle") return cycle_graph(static_cast<NodeId>(spec_int(parts, 1, spec)));
  if (kind == "path") return path_graph(static_cast<NodeId>(spec_int(parts, 1, spec)));
  if (kind == "complete") return complete_graph(static_cast<NodeId>(spec_int(parts, 1, spec)));
  if (kind == "cycles")
    return disjoint_union(cycle_graph(static_cast<NodeId>(spec_int(parts, 1, spec))),
                          cycle_graph(static_cast<NodeId>(spec_int(parts, 2, spec))));
  if (kind == "csl")
    return csl_graph(static_cast<NodeId>(spec_int(parts, 1, spec)),
                     static_cast<NodeId>(spec_int(parts, 2, spec)));
  if (kind == "regular")
    return random_regular_graph(static_cast<NodeId>(spec_int(parts, 1, spec)),
                                static_cast<int>(spec_int(parts, 2, spec)),
                                static_cast<std::uint64_t>(spec_int(parts, 3, spec)));
  if (kind == "er")
    return erdos_renyi(static_cast<NodeId>(spec_int(parts, 1, spec)), spec_num(parts, 2, spec),
                       static_cast<std::uint64_t>(spec_int(parts, 3, spec)));
  if (kind == "citation")
    return citation_like_graph(static_cast<NodeId>(spec_int(parts, 1, spec)),
                               static_cast<int>(spec_int(parts, 2, spec)),
                               static_cast<std::uint64_t>(spec_int(parts, 3, spec)));
  if (kind == "shrikhande") return shrikhande_graph();
  if (kind == "rook") return rook4x4_graph();
  if (kind == "bridge-ring") return bridge_ring_graph();
  throw DataError("not a file and not a builtin graph spec: " + spec);
}

std::vector<std::int32_t> load_node_labels(const std::string& path, NodeId num_nodes) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labels file: " + path);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(num_nodes), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long v, y;
    if (!(ls >> v >> y))
      throw DataError(path + ":" + std::to_string(lineno) + ": expected `node<TAB>label`");
    if (v < 0 || v >= num_nodes)
      throw DataError(path + ":" + std::to_string(lineno) + ": node id out of range");
    labels[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(y);
  }
  return labels;
}

namespace {

struct TrainArgs {
  std::string graph, collection, labels, config_file, metrics_out, model_out;
  KeyValues overrides;
};

void print_link_metrics(const Metrics& m, int hits_k, std::ostream& out) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "auc\t%.6f\nap\t%.6f\nhits@%d\t%.6f\nloss\t%.6f\n", m.auc,
                m.average_precision, hits_k, m.hits_at_k, m.final_loss);
  out << buf;
}

void run_train(const TrainArgs& a, std::ostream& out) {
  KeyValues kv;
  if (!a.config_file.empty()) kv = load_key_values(a.config_file);
  for (const auto& [k, v] : a.overrides) kv[k] = v;
  TrainConfig cfg = TrainConfig::from_key_values(kv);

  TrainResult result;
  if (cfg.task == Task::kLink) {
    if (a.graph.empty()) throw DataError("train --task link needs --graph");
    result = train_link(resolve_graph_arg(a.graph), cfg);
    print_link_metrics(result.metrics, cfg.hits_k, out);
  } else if (cfg.task == Task::kNode) {
    if (a.graph.empty() || a.labels.empty()) throw DataError("train --task node needs --graph and --labels");
    Graph g = resolve_graph_arg(a.graph);
    result = train_node(g, load_node_labels(a.labels, g.num_nodes()), cfg);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "accuracy\t%.6f\nloss\t%.6f\n", result.metrics.accuracy,
                  result.metrics.final_loss);
    out << buf;
  } else {
    if (a.collection.empty()) throw DataError("train --task graph needs --collection");
    result = train_graph_classification(load_collection(a.collection), cfg);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "accuracy\t%.6f\nloss\t%.6f\n", result.metrics.accuracy,
                  result.metrics.final_loss);
    out << buf;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "gnn_forwards\t%llu\ngeodesic_extractions\t%llu\n",
                static_cast<unsigned long long>(result.ledger.gnn_forwards),
                static_cast<unsigned long long>(result.ledger.geodesic_extractions));
  out << buf;

  if (!a.metrics_out.empty()) {
    std::ofstream mout(a.metrics_out);
    if (!mout) throw DataError("cannot write metrics file: " + a.metrics_out);
    write_metrics_csv(result.metrics.rows, mout);
  }
  if (!a.model_out.empty()) save_checkpoint(cfg, result.model, a.model_out);
}

struct EvalArgs {
  std::string model, graph, collection, labels;
  int threads = 1;
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  auto [cfg, params] = load_checkpoint(a.model);
  const PoolConfig pool = cfg.pool_config();
  if (cfg.task == Task::kLink) {
    if (a.graph.empty()) throw DataError("eval --task link needs --graph");
    Graph g = resolve_graph_arg(a.graph);
    LinkSplit split = split_links(g, cfg.train_ratio, cfg.valid_ratio, cfg.test_ratio, cfg.seed);
    double r = std::max(1.0, static_cast<double>(cfg.hits_k + 1) /
                                 static_cast<double>(split.test_pos.size()));
    auto negs = sample_negatives(g, split.test_pos, r, cfg.seed ^ 0xE2E2E2E2ULL);
    Matrix x = ones_degree_features(split.train_graph);
    RunLedger ledger;
    Metrics m = evaluate_link(split.train_graph, x, params, pool, split.test_pos, negs,
                              cfg.hits_k, &ledger, a.threads);
    print_link_metrics(m, cfg.hits_k, out);
  } else if (cfg.task == Task::kNode) {
    if (a.graph.empty() || a.labels.empty()) throw DataError("eval --task node needs --graph and --labels");
    Graph g = resolve_graph_arg(a.graph);
    auto labels = load_node_labels(a.labels, g.num_nodes());
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (labels[static_cast<std::size_t>(v)] >= 0) nodes.push_back(v);
    Metrics m = evaluate_nodes(g, ones_degree_features(g), params, pool, nodes, labels);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "accuracy\t%.6f\n", m.accuracy);
    out << buf;
  } else {
    if (a.collection.empty()) throw DataError("eval --task graph needs --collection");
    GraphCollection coll = load_collection(a.collection);
    std::vector<std::int32_t> idx(coll.graphs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int32_t>(i);
    Metrics m = evaluate_graphs(coll, params, pool, idx);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "accuracy\t%.6f\n", m.accuracy);
    out << buf;
  }
}

GraphCollection csl10_collection(NodeId n) {
  const NodeId skips[] = {2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
  GraphCollection c;
  std::int32_t label = 0;
  for (NodeId s : skips) {
    c.graphs.push_back(csl_graph(n, s));
    c.labels.push_back(label++);
  }
  return c;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geodesic-augmented graph learning toolkit"};
  app.name("gdgnn");
  app.require_subcommand(1);

  // --- wl ---
  auto* wl_cmd = app.add_subcommand("wl", "1-WL color refinement of a graph");
  std::string wl_graph;
  int wl_rounds = 64;
  wl_cmd->add_option("graph", wl_graph, "edge-list file or builtin spec")->required();
  wl_cmd->add_option("--rounds", wl_rounds, "refinement round cap");
  wl_cmd->callback([&]() {
    Graph g = resolve_graph_arg(wl_graph);
    ColorPartition p = wl_refine(g, wl_rounds);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "nodes=%d classes=%d rounds=%d\n", g.num_nodes(),
                  p.num_classes(), p.rounds_to_stabilize);
    out << buf;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      out << v << '\t' << p.colors[static_cast<std::size_t>(v)] << '\n';
  });

  // --- geodesic ---
  auto* geo_cmd = app.add_subcommand("geodesic", "extract a pair geodesic");
  std::string geo_graph, geo_variant = "horizontal", geo_policy = "lexicographic";
  std::vector<NodeId> geo_pair;
  int geo_dmax = 0;
  std::uint64_t geo_seed = 0;
  geo_cmd->add_option("graph", geo_graph, "edge-list file or builtin spec")->required();
  geo_cmd->add_option("--pair", geo_pair, "node pair u v")->expected(2)->required();
  geo_cmd->add_option("--dmax", geo_dmax, "distance cutoff (0 = number of nodes)");
  geo_cmd->add_option("--variant", geo_variant, "horizontal|vertical");
  geo_cmd->add_option("--policy", geo_policy, "lexicographic|seeded-random");
  geo_cmd->add_option("--seed", geo_seed, "seed for the random tie policy");
  geo_cmd->callback([&]() {
    Graph g = resolve_graph_arg(geo_graph);
    const NodeId u = geo_pair[0], v = geo_pair[1];
    if (u < 0 || u >= g.num_nodes() || v < 0 || v >= g.num_nodes())
      throw DataError("pair endpoint out of range");
    const int dmax = geo_dmax > 0 ? geo_dmax : g.num_nodes();
    DistanceMap dv = bfs_distances(g, v, dmax);
    if (geo_variant == "horizontal") {
      TiePolicy policy = geo_policy == "seeded-random" ? TiePolicy::seeded_random(geo_seed)
                                                       : TiePolicy::lexicographic();
      auto h = horizontal_geodesic(g, u, v, dv, policy);
      if (!h) {
        out << "distance\tinf\n";
        return;
      }
      out << "distance\t" << h->distance() << "\n";
      out << "path\t";
      for (std::size_t i = 0; i < h->path.size(); ++i) out << (i ? " " : "") << h->path[i];
      out << "\n";
    } else if (geo_variant == "vertical") {
      DistanceMap du = bfs_distances(g, u, dmax);
      auto gd = vertical_geodesic(g, u, v, du, dv);
      if (!gd) {
        out << "distance\tinf\n";
        return;
      }
      out << "distance\t" << gd->distance << "\n";
      auto print_set = [&](const char* name, const std::vector<NodeId>& set) {
        out << name << '\t';
        for (std::size_t i = 0; i < set.size(); ++i) out << (i ? " " : "") << set[i];
        out << '\n';
      };
      print_set("near_u", gd->near_u);
      print_set("near_v", gd->near_v);
      std::vector<NodeId> members;
      for (auto& [w, d] : gd->degrees) members.push_back(w);
      std::sort(members.begin(), members.end());
      out << "degrees\t";
      for (std::size_t i = 0; i < members.size(); ++i)
        out << (i ? " " : "") << members[i] << ':' << gd->degrees.at(members[i]);
      out << '\n';
    } else {
      throw DataError("unknown geodesic variant: " + geo_variant);
    }
  });

  // --- signature ---
  auto* sig_cmd = app.add_subcommand("signature", "canonical distinguisher signature");
  std::string sig_graph, sig_variant = "vert";
  int sig_dmax = 3;
  sig_cmd->add_option("graph", sig_graph, "edge-list file or builtin spec")->required();
  sig_cmd->add_option("--dmax", sig_dmax, "distance cutoff")->check(CLI::PositiveNumber);
  sig_cmd->add_option("--variant", sig_variant, "vert|vertdeg|hor");
  sig_cmd->callback([&]() {
    Graph g = resolve_graph_arg(sig_graph);
    out << to_text(canonical_signature(g, sig_dmax, parse_signature_variant(sig_variant)));
  });

  // --- distinguish ---
  auto* dis_cmd = app.add_subcommand("distinguish", "compare canonical signatures");
  std::vector<std::string> dis_graphs;
  std::string dis_collection, dis_variant = "vert";
  int dis_dmax = 3;
  dis_cmd->add_option("graphs", dis_graphs, "two edge-list files or builtin specs")->expected(0, 2);
  dis_cmd->add_option("--collection", dis_collection, "collection file: compare all pairs");
  dis_cmd->add_option("--dmax", dis_dmax, "distance cutoff")->check(CLI::PositiveNumber);
  dis_cmd->add_option("--variant", dis_variant, "vert|vertdeg|hor");
  dis_cmd->callback([&]() {
    SignatureVariant variant = parse_signature_variant(dis_variant);
    if (!dis_collection.empty()) {
      GraphCollection coll = load_collection(dis_collection);
      std::vector<CanonicalSignature> sigs;
      sigs.reserve(coll.graphs.size());
      for (const Graph& g : coll.graphs)
        sigs.push_back(canonical_signature(g, dis_dmax, variant));
      for (std::size_t i = 0; i < sigs.size(); ++i)
        for (std::size_t j = i + 1; j < sigs.size(); ++j)
          out << i << '-' << j << '\t' << dis_variant << '\t' << (sigs[i] != sigs[j] ? 1 : 0)
              << '\n';
    } else {
      if (dis_graphs.size() != 2)
        throw DataError("distinguish needs two graphs or --collection");
      bool d = distinguish_pair(resolve_graph_arg(dis_graphs[0]), resolve_graph_arg(dis_graphs[1]),
                                dis_dmax, variant);
      out << 0 << '\t' << dis_variant << '\t' << (d ? 1 : 0) << '\n';
    }
  });

  // --- gen ---
  auto* gen_cmd = app.add_subcommand("gen", "write a generated graph or collection");
  std::string gen_kind, gen_out;
  gen_cmd->add_option("--kind", gen_kind, "builtin spec, or csl10:<n> for a labeled collection")
      ->required();
  gen_cmd->add_option("--out", gen_out, "output path")->required();
  gen_cmd->callback([&]() {
    auto parts = split_spec(gen_kind);
    if (parts[0] == "csl10") {
      save_collection(csl10_collection(static_cast<NodeId>(spec_int(parts, 1, gen_kind))),
                      gen_out);
    } else {
      save_edge_list(resolve_graph_arg(gen_kind), gen_out);
    }
  });

  // --- train ---
  auto* train_cmd = app.add_subcommand("train", "train a model");
  TrainArgs ta;
  std::map<std::string, std::string> flag_to_key = {
      {"--task", "task"},           {"--layer-kind", "layer_kind"},
      {"--layers", "layers"},       {"--hidden", "hidden"},
      {"--dmax", "dmax"},           {"--variant", "variant"},
      {"--reducer", "reducer"},     {"--graph-reducer", "graph_reducer"},
      {"--node-k", "node_k"},       {"--lr", "lr"},
      {"--epochs", "epochs"},       {"--batch-size", "batch_size"},
      {"--neg-ratio", "neg_ratio"}, {"--seed", "seed"},
      {"--hits-k", "hits_k"},       {"--eval-every", "eval_every"},
      {"--head-hidden", "head_hidden"},
  };
  std::map<std::string, std::string> flag_values;
  train_cmd->add_option("--graph", ta.graph, "edge-list file or builtin spec");
  train_cmd->add_option("--collection", ta.collection, "graph collection file");
  train_cmd->add_option("--labels", ta.labels, "node labels file");
  train_cmd->add_option("--config", ta.config_file, "key=value config file");
  train_cmd->add_option("--metrics-out", ta.metrics_out, "metrics CSV path");
  train_cmd->add_option("--model-out", ta.model_out, "checkpoint path");
  for (const auto& [flag, key] : flag_to_key)
    train_cmd->add_option(flag, flag_values[key], "overrides config key " + key);
  train_cmd->callback([&]() {
    for (const auto& [key, value] : flag_values)
      if (!value.empty()) ta.overrides[key] = value;
    run_train(ta, out);
  });

  // --- eval ---
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  EvalArgs ea;
  eval_cmd->add_option("--model", ea.model, "checkpoint path")->required();
  eval_cmd->add_option("--graph", ea.graph, "edge-list file or builtin spec");
  eval_cmd->add_option("--collection", ea.collection, "graph collection file");
  eval_cmd->add_option("--labels", ea.labels, "node labels file");
  eval_cmd->add_option("--threads", ea.threads, "extraction threads");
  eval_cmd->callback([&]() { run_eval(ea, out); });

  // --- bench ---
  auto* bench_cmd = app.add_subcommand("bench", "amortization benchmark");
  std::string bench_graph, bench_method = "both", bench_variant = "vertdeg";
  std::size_t bench_queries = 1000;
  std::uint64_t bench_seed = 1;
  int bench_dmax = 3, bench_layers = 3, bench_hidden = 32, bench_radius = 0;
  bench_cmd->add_option("--graph", bench_graph, "edge-list file or builtin spec")->required();
  bench_cmd->add_option("--queries", bench_queries, "number of query links");
  bench_cmd->add_option("--method", bench_method, "gdgnn|subgraph-baseline|both");
  bench_cmd->add_option("--seed", bench_seed, "query/model seed");
  bench_cmd->add_option("--dmax", bench_dmax, "geodesic cutoff")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--layers", bench_layers, "GNN depth");
  bench_cmd->add_option("--hidden", bench_hidden, "hidden width");
  bench_cmd->add_option("--radius", bench_radius, "baseline hop radius (0 = dmax)");
  bench_cmd->add_option("--variant", bench_variant, "pooling variant for the gdgnn method");
  bench_cmd->callback([&]() {
    Graph g = resolve_graph_arg(bench_graph);
    auto queries = disjoint_queries(g, bench_queries, bench_seed);
    BenchConfig bc;
    bc.layers = bench_layers;
    bc.hidden = bench_hidden;
    bc.seed = bench_seed;
    bc.pool.d_max = bench_dmax;
    bc.pool.variant = parse_pool_variant(bench_variant);
    bc.radius = bench_radius;
    out << bench_csv_header() << '\n';
    if (bench_method == "gdgnn" || bench_method == "both") {
      BenchResult r = run_benchmark(g, queries, BenchMethod::kGdgnn, bc);
      out << bench_csv_row(BenchMethod::kGdgnn, queries.size(), r) << '\n';
    }
    if (bench_method == "subgraph-baseline" || bench_method == "baseline" ||
        bench_method == "both") {
      BenchResult r = run_benchmark(g, queries, BenchMethod::kSubgraphBaseline, bc);
      out << bench_csv_row(BenchMethod::kSubgraphBaseline, queries.size(), r) << '\n';
    }
    if (bench_method != "gdgnn" && bench_method != "subgraph-baseline" &&
        bench_method != "baseline" && bench_method != "both")
      throw DataError("unknown bench method: " + bench_method);
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace gdgnn
