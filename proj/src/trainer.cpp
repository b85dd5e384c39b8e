#include "gdgnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace gdgnn {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Task parse_task(const std::string& name) {
  if (name == "link") return Task::kLink;
  if (name == "node") return Task::kNode;
  if (name == "graph") return Task::kGraph;
  throw DataError("unknown task: " + name + " (expected link|node|graph)");
}

std::string to_string(Task t) {
  switch (t) {
    case Task::kLink: return "link";
    case Task::kNode: return "node";
    case Task::kGraph: return "graph";
  }
  return "?";
}

PoolConfig TrainConfig::pool_config() const {
  PoolConfig p;
  p.variant = variant;
  p.reducer = reducer;
  p.node_reducer = node_reducer;
  p.graph_reducer = graph_reducer;
  p.d_max = effective_d_max();
  p.node_k = node_k;
  p.horizontal_distance = horizontal_distance;
  p.tie_policy = tie_kind == TiePolicy::kLexicographic ? TiePolicy::lexicographic()
                                                       : TiePolicy::seeded_random(seed);
  return p;
}

void TrainConfig::validate() const {
  if (layers < 1) throw std::invalid_argument("config: layers must be >= 1");
  if (hidden < 1) throw std::invalid_argument("config: hidden must be >= 1");
  if (effective_d_max() < 1) throw std::invalid_argument("config: d_max must be >= 1");
  if (lr <= 0.0) throw std::invalid_argument("config: lr must be positive");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (neg_ratio < 1.0) throw std::invalid_argument("config: neg_ratio must be >= 1");
  if (hits_k < 1) throw std::invalid_argument("config: hits_k must be >= 1");
  if (eval_every < 0) throw std::invalid_argument("config: eval_every must be >= 0");
  if (train_ratio <= 0.0 || valid_ratio < 0.0 || test_ratio < 0.0 ||
      std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9)
    throw std::invalid_argument("config: split ratios must be nonnegative and sum to 1");
  pool_config().validate();
}

TrainConfig TrainConfig::from_key_values(const KeyValues& kv) {
  TrainConfig c;
  auto parse_bool = [](const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw DataError("config key " + key + ": expected boolean, got `" + v + "`");
  };
  for (const auto& [key, value] : kv) {
    try {
      if (key == "task") c.task = parse_task(value);
      else if (key == "layer_kind") c.layer_kind = parse_layer_kind(value);
      else if (key == "layers") c.layers = std::stoi(value);
      else if (key == "hidden") c.hidden = std::stoi(value);
      else if (key == "dmax") c.d_max = std::stoi(value);
      else if (key == "variant") c.variant = parse_pool_variant(value);
      else if (key == "reducer") c.reducer = parse_reducer(value);
      else if (key == "node_reducer") c.node_reducer = parse_reducer(value);
      else if (key == "graph_reducer") c.graph_reducer = parse_reducer(value);
      else if (key == "node_k") c.node_k = std::stoi(value);
      else if (key == "horizontal_distance") c.horizontal_distance = parse_bool(key, value);
      else if (key == "tie_policy") {
        if (value == "lexicographic") c.tie_kind = TiePolicy::kLexicographic;
        else if (value == "seeded-random") c.tie_kind = TiePolicy::kSeededRandom;
        else throw DataError("config key tie_policy: expected lexicographic|seeded-random");
      }
      else if (key == "lr") c.lr = std::stod(value);
      else if (key == "epochs") c.epochs = std::stoi(value);
      else if (key == "batch_size") c.batch_size = std::stoi(value);
      else if (key == "neg_ratio") c.neg_ratio = std::stod(value);
      else if (key == "seed") c.seed = std::stoull(value);
      else if (key == "train_ratio") c.train_ratio = std::stod(value);
      else if (key == "valid_ratio") c.valid_ratio = std::stod(value);
      else if (key == "test_ratio") c.test_ratio = std::stod(value);
      else if (key == "hits_k") c.hits_k = std::stoi(value);
      else if (key == "eval_every") c.eval_every = std::stoi(value);
      else if (key == "head_hidden") c.head_hidden = std::stoi(value);
      else throw DataError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
      throw DataError("config key " + key + ": cannot parse value `" + value + "`");
    } catch (const std::out_of_range&) {
      throw DataError("config key " + key + ": value out of range `" + value + "`");
    }
  }
  return c;
}

namespace {

KeyValues to_key_values(const TrainConfig& c) {
  KeyValues kv;
  auto num = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };
  kv["task"] = to_string(c.task);
  kv["layer_kind"] = to_string(c.layer_kind);
  kv["layers"] = std::to_string(c.layers);
  kv["hidden"] = std::to_string(c.hidden);
  kv["dmax"] = std::to_string(c.d_max);
  kv["variant"] = to_string(c.variant);
  kv["reducer"] = to_string(c.reducer);
  kv["node_reducer"] = to_string(c.node_reducer);
  kv["graph_reducer"] = to_string(c.graph_reducer);
  kv["node_k"] = std::to_string(c.node_k);
  kv["horizontal_distance"] = c.horizontal_distance ? "1" : "0";
  kv["tie_policy"] = c.tie_kind == TiePolicy::kLexicographic ? "lexicographic" : "seeded-random";
  kv["lr"] = num(c.lr);
  kv["epochs"] = std::to_string(c.epochs);
  kv["batch_size"] = std::to_string(c.batch_size);
  kv["neg_ratio"] = num(c.neg_ratio);
  kv["seed"] = std::to_string(c.seed);
  kv["train_ratio"] = num(c.train_ratio);
  kv["valid_ratio"] = num(c.valid_ratio);
  kv["test_ratio"] = num(c.test_ratio);
  kv["hits_k"] = std::to_string(c.hits_k);
  kv["eval_every"] = std::to_string(c.eval_every);
  kv["head_hidden"] = std::to_string(c.head_hidden);
  return kv;
}

}  // namespace

Adam::Adam(const ModelParams& params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.reserve(params.num_slots());
  v_.reserve(params.num_slots());
  for (std::size_t i = 0; i < params.num_slots(); ++i) {
    m_.push_back(Matrix::zeros_like(params.slot(i)));
    v_.push_back(Matrix::zeros_like(params.slot(i)));
  }
}

void Adam::step(ModelParams& params, const std::vector<Matrix>& grads) {
  if (grads.size() != m_.size()) throw std::invalid_argument("adam: gradient count mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t s = 0; s < m_.size(); ++s) {
    if (grads[s].empty()) continue;
    auto& m = m_[s].data();
    auto& v = v_[s].data();
    auto& p = params.slot(s).data();
    const auto& g = grads[s].data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      p[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_);
    }
  }
}

LinkSplit split_links(const Graph& g, double train_ratio, double valid_ratio, double test_ratio,
                      std::uint64_t seed) {
  if (std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9)
    throw std::invalid_argument("split_links: ratios must sum to 1");
  auto edges = g.undirected_edges();
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);

  const auto m = static_cast<std::int64_t>(edges.size());
  const auto n_test = static_cast<std::int64_t>(std::llround(test_ratio * static_cast<double>(m)));
  const auto n_valid =
      static_cast<std::int64_t>(std::llround(valid_ratio * static_cast<double>(m)));
  const auto n_train = m - n_test - n_valid;
  if (n_train <= 0 || (test_ratio > 0.0 && n_test <= 0) || (valid_ratio > 0.0 && n_valid <= 0))
    throw DataError("split_links: graph too small to split at these ratios");

  LinkSplit out;
  out.test_pos.assign(edges.begin(), edges.begin() + n_test);
  out.valid_pos.assign(edges.begin() + n_test, edges.begin() + n_test + n_valid);
  out.train_pos.assign(edges.begin() + n_test + n_valid, edges.end());

  std::vector<EdgeInput> keep;
  keep.reserve(out.train_pos.size());
  for (auto [u, v] : out.train_pos) keep.push_back({u, v, 0});
  out.train_graph = build_graph(keep, g.num_nodes(), /*undirected=*/true);
  return out;
}

std::vector<Edge> sample_negatives(const Graph& g, std::span<const Edge> positives, double ratio,
                                   std::uint64_t seed) {
  if (ratio < 1.0) throw std::invalid_argument("sample_negatives: ratio must be >= 1");
  if (positives.empty()) throw std::invalid_argument("sample_negatives: no positives given");
  const NodeId n = g.num_nodes();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> node_pick(0, n - 1);

  const auto count =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(positives.size())));
  std::vector<Edge> out;
  out.reserve(count);

  std::vector<Edge> all_non_edges;  // filled lazily on rejection exhaustion
  bool enumerated = false;
  auto enumerate_non_edges = [&]() {
    if (enumerated) return;
    enumerated = true;
    if (static_cast<std::int64_t>(n) * n > 64LL * 1000 * 1000)
      throw std::runtime_error("sample_negatives: rejection exhausted on a graph too large to enumerate");
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v)) all_non_edges.emplace_back(u, v);
    if (all_non_edges.empty())
      throw DataError("sample_negatives: graph has no non-edges to sample");
  };

  for (std::size_t i = 0; i < count; ++i) {
    const Edge& base = positives[i % positives.size()];
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const NodeId cand = node_pick(rng);
      const bool corrupt_head = (rng() & 1ULL) != 0;
      const NodeId u = corrupt_head ? cand : base.first;
      const NodeId v = corrupt_head ? base.second : cand;
      if (u == v || g.has_edge(u, v)) continue;
      out.emplace_back(u, v);
      placed = true;
    }
    if (!placed) {
      enumerate_non_edges();
      std::uniform_int_distribution<std::size_t> pick(0, all_non_edges.size() - 1);
      out.push_back(all_non_edges[pick(rng)]);
    }
  }
  return out;
}

IndexSplit split_indices(std::size_t n, double train_ratio, double valid_ratio, double test_ratio,
                         std::uint64_t seed) {
  if (std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9)
    throw std::invalid_argument("split_indices: ratios must sum to 1");
  std::vector<std::int32_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::int32_t>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_test = static_cast<std::size_t>(std::llround(test_ratio * static_cast<double>(n)));
  const auto n_valid =
      static_cast<std::size_t>(std::llround(valid_ratio * static_cast<double>(n)));
  if (n_test + n_valid >= n) throw DataError("split_indices: too few items to split");
  IndexSplit s;
  s.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.valid.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test),
                 idx.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid));
  s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid), idx.end());
  return s;
}

namespace {

std::vector<PairGeodesic> extract_pairs(const Graph& g, std::span<const Edge> pairs,
                                        const PoolConfig& cfg, RunLedger* ledger,
                                        DistanceCache* cache, int threads) {
  std::vector<PairGeodesic> out(pairs.size());
  if (threads <= 1 || pairs.size() < 64 || cache != nullptr) {
    DistanceCache local(g, cfg.d_max);
    DistanceCache& c = cache ? *cache : local;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      out[i] = extract_pair_geodesic(g, pairs[i].first, pairs[i].second, c, cfg, ledger,
                                     /*mask_direct_edge=*/true);
    return out;
  }
  // Thread-local caches: extraction is pure, so only the ledger needs care.
  std::vector<std::thread> workers;
  const std::size_t chunk = (pairs.size() + static_cast<std::size_t>(threads) - 1) /
                            static_cast<std::size_t>(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(pairs.size(), lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi]() {
      DistanceCache local(g, cfg.d_max);
      for (std::size_t i = lo; i < hi; ++i)
        out[i] = extract_pair_geodesic(g, pairs[i].first, pairs[i].second, local, cfg, nullptr,
                                       /*mask_direct_edge=*/true);
    });
  }
  for (auto& w : workers) w.join();
  if (ledger) ledger->geodesic_extractions += pairs.size();
  return out;
}

}  // namespace

std::vector<double> score_links(const Graph& msg_graph, const Matrix& x, const ModelParams& params,
                                const PoolConfig& cfg, std::span<const Edge> pairs,
                                RunLedger* ledger, DistanceCache* cache, int threads) {
  Tape tape(params.num_slots());
  auto ids = register_params(tape, params);
  Tape::ValueId x_id = tape.constant(x);
  Tape::ValueId h = gnn_forward_on_tape(tape, msg_graph, x_id, params, ids, ledger);

  auto geo = extract_pairs(msg_graph, pairs, cfg, ledger, cache, threads);
  std::vector<Tape::ValueId> reps;
  reps.reserve(pairs.size());
  for (const auto& pair : geo) reps.push_back(edge_representation_from_pair(tape, h, pair, cfg));
  Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), params, ids);

  const Matrix& z = tape.value(logits);
  std::vector<double> scores(pairs.size());
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = z(i, 0);
  return scores;
}

Matrix score_nodes(const Graph& g, const Matrix& x, const ModelParams& params,
                   const PoolConfig& cfg, std::span<const NodeId> nodes, RunLedger* ledger) {
  Tape tape(params.num_slots());
  auto ids = register_params(tape, params);
  Tape::ValueId x_id = tape.constant(x);
  Tape::ValueId h = gnn_forward_on_tape(tape, g, x_id, params, ids, ledger);
  std::vector<Tape::ValueId> reps;
  reps.reserve(nodes.size());
  for (NodeId v : nodes) reps.push_back(node_representation(tape, g, h, v, cfg, ledger));
  Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), params, ids);
  return tape.value(logits);
}

Matrix score_graphs(const GraphCollection& coll, const ModelParams& params, const PoolConfig& cfg,
                    std::span<const std::int32_t> indices, RunLedger* ledger) {
  Tape tape(params.num_slots());
  auto ids = register_params(tape, params);
  std::vector<Tape::ValueId> reps;
  reps.reserve(indices.size());
  for (std::int32_t gi : indices) {
    const Graph& g = coll.graphs[static_cast<std::size_t>(gi)];
    Tape::ValueId x_id = tape.constant(ones_degree_features(g));
    Tape::ValueId h = gnn_forward_on_tape(tape, g, x_id, params, ids, ledger);
    reps.push_back(graph_representation(tape, g, h, cfg, ledger));
  }
  Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), params, ids);
  return tape.value(logits);
}

Metrics evaluate_link(const Graph& msg_graph, const Matrix& x, const ModelParams& params,
                      const PoolConfig& cfg, std::span<const Edge> positives,
                      std::span<const Edge> negatives, int hits_k, RunLedger* ledger,
                      int threads) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("evaluate_link: empty evaluation set");
  std::vector<Edge> all(positives.begin(), positives.end());
  all.insert(all.end(), negatives.begin(), negatives.end());
  auto scores = score_links(msg_graph, x, params, cfg, all, ledger, nullptr, threads);
  std::span<const double> pos(scores.data(), positives.size());
  std::span<const double> neg(scores.data() + positives.size(), negatives.size());
  Metrics m;
  m.auc = auc_score(pos, neg);
  m.average_precision = average_precision_score(pos, neg);
  m.hits_at_k = hits_at_k_score(pos, neg, static_cast<std::size_t>(hits_k));
  return m;
}

Metrics evaluate_nodes(const Graph& g, const Matrix& x, const ModelParams& params,
                       const PoolConfig& cfg, std::span<const NodeId> nodes,
                       const std::vector<std::int32_t>& labels, RunLedger* ledger) {
  if (nodes.empty()) throw std::invalid_argument("evaluate_nodes: empty evaluation set");
  Matrix logits = score_nodes(g, x, params, cfg, nodes, ledger);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = c;
    if (static_cast<std::int32_t>(best) == labels[static_cast<std::size_t>(nodes[i])]) ++correct;
  }
  Metrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(nodes.size());
  return m;
}

Metrics evaluate_graphs(const GraphCollection& coll, const ModelParams& params,
                        const PoolConfig& cfg, std::span<const std::int32_t> indices,
                        RunLedger* ledger) {
  if (indices.empty()) throw std::invalid_argument("evaluate_graphs: empty evaluation set");
  Matrix logits = score_graphs(coll, params, cfg, indices, ledger);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = c;
    if (static_cast<std::int32_t>(best) == coll.labels[static_cast<std::size_t>(indices[i])])
      ++correct;
  }
  Metrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
  return m;
}

namespace {

void check_finite_loss(double loss, int step) {
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "training diverged: non-finite loss " << loss << " at step " << step
        << "; reduce lr or check the data";
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

TrainResult train_link(const Graph& g, const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.task != Task::kLink) throw std::invalid_argument("train_link: config task mismatch");
  const PoolConfig pool = cfg.pool_config();

  TrainResult result;
  result.split = split_links(g, cfg.train_ratio, cfg.valid_ratio, cfg.test_ratio, cfg.seed);
  const Graph& tg = result.split.train_graph;
  const Matrix x = ones_degree_features(tg);

  ModelDims dims;
  dims.kind = cfg.layer_kind;
  dims.layers = cfg.layers;
  dims.input_dim = static_cast<int>(x.cols());
  dims.hidden = cfg.hidden;
  dims.head_input = pool.edge_dim(cfg.hidden);
  dims.head_hidden = cfg.effective_head_hidden();
  dims.head_output = 1;
  result.model = ModelParams::init(dims, mix_seed(cfg.seed, 0xA11));

  Adam opt(result.model, cfg.lr);
  DistanceCache cache(tg, pool.d_max);
  std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 0x5F));

  // Fixed evaluation negatives so the validation curve is comparable across
  // epochs. Sampled against the full graph to avoid false negatives.
  std::vector<Edge> valid_neg, test_neg;
  const bool do_valid = !result.split.valid_pos.empty();
  if (do_valid) {
    double r = std::max(1.0, static_cast<double>(cfg.hits_k + 1) /
                                 static_cast<double>(result.split.valid_pos.size()));
    valid_neg = sample_negatives(g, result.split.valid_pos, r, mix_seed(cfg.seed, 0xE1));
  }
  if (!result.split.test_pos.empty()) {
    double r = std::max(1.0, static_cast<double>(cfg.hits_k + 1) /
                                 static_cast<double>(result.split.test_pos.size()));
    test_neg = sample_negatives(g, result.split.test_pos, r, mix_seed(cfg.seed, 0xE2));
  }

  std::vector<Edge> order = result.split.train_pos;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    int epoch_batches = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t hi = std::min(order.size(), at + static_cast<std::size_t>(cfg.batch_size));
      std::span<const Edge> batch(order.data() + at, hi - at);
      auto negs =
          sample_negatives(g, batch, cfg.neg_ratio, mix_seed(cfg.seed, 0xB0 + result.steps));

      Tape tape(result.model.num_slots());
      auto ids = register_params(tape, result.model);
      Tape::ValueId x_id = tape.constant(x);
      Tape::ValueId h = gnn_forward_on_tape(tape, tg, x_id, result.model, ids, &result.ledger);

      std::vector<Tape::ValueId> reps;
      std::vector<double> targets;
      reps.reserve(batch.size() + negs.size());
      targets.reserve(batch.size() + negs.size());
      for (const Edge& e : batch) {
        PairGeodesic pg = extract_pair_geodesic(tg, e.first, e.second, cache, pool,
                                                &result.ledger, /*mask_direct_edge=*/true);
        reps.push_back(edge_representation_from_pair(tape, h, pg, pool));
        targets.push_back(1.0);
      }
      for (const Edge& e : negs) {
        PairGeodesic pg = extract_pair_geodesic(tg, e.first, e.second, cache, pool,
                                                &result.ledger, /*mask_direct_edge=*/true);
        reps.push_back(edge_representation_from_pair(tape, h, pg, pool));
        targets.push_back(0.0);
      }
      Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), result.model, ids);
      Tape::ValueId loss_id = tape.sigmoid_bce(logits, std::move(targets));
      const double loss = tape.value(loss_id)(0, 0);
      check_finite_loss(loss, result.steps);
      result.step_losses.push_back(loss);
      epoch_loss += loss;
      ++epoch_batches;
      ++result.steps;

      opt.step(result.model, tape.backward(loss_id));
    }
    result.metrics.rows.push_back(
        {epoch, "train", "loss", epoch_loss / std::max(1, epoch_batches)});
    result.metrics.final_loss = epoch_loss / std::max(1, epoch_batches);

    if (do_valid && cfg.eval_every > 0 && epoch % cfg.eval_every == 0) {
      Metrics vm = evaluate_link(tg, x, result.model, pool, result.split.valid_pos, valid_neg,
                                 cfg.hits_k, &result.ledger);
      result.metrics.rows.push_back({epoch, "valid", "auc", vm.auc});
    }
  }

  if (!result.split.test_pos.empty()) {
    Metrics tm = evaluate_link(tg, x, result.model, pool, result.split.test_pos, test_neg,
                               cfg.hits_k, &result.ledger);
    result.metrics.auc = tm.auc;
    result.metrics.average_precision = tm.average_precision;
    result.metrics.hits_at_k = tm.hits_at_k;
    result.metrics.rows.push_back({cfg.epochs, "test", "auc", tm.auc});
    result.metrics.rows.push_back({cfg.epochs, "test", "ap", tm.average_precision});
    result.metrics.rows.push_back({cfg.epochs, "test", "hits", tm.hits_at_k});
  }
  return result;
}

namespace {

TrainResult train_classifier(const Graph* node_graph, const std::vector<std::int32_t>* node_labels,
                             const GraphCollection* coll, const TrainConfig& cfg) {
  const PoolConfig pool = cfg.pool_config();
  const bool node_task = node_graph != nullptr;

  std::vector<std::int32_t> targets;  // labels per item
  std::vector<std::int32_t> items;    // node ids or graph indices
  if (node_task) {
    for (std::size_t v = 0; v < node_labels->size(); ++v)
      if ((*node_labels)[v] >= 0) items.push_back(static_cast<std::int32_t>(v));
  } else {
    if (!coll->has_labels()) throw DataError("graph classification needs labeled graphs");
    for (std::size_t i = 0; i < coll->graphs.size(); ++i)
      items.push_back(static_cast<std::int32_t>(i));
  }
  if (items.size() < 3) throw DataError("too few labeled items to train");
  auto label_of = [&](std::int32_t item) {
    return node_task ? (*node_labels)[static_cast<std::size_t>(item)]
                     : coll->labels[static_cast<std::size_t>(item)];
  };
  std::int32_t num_classes = 0;
  for (std::int32_t it : items) num_classes = std::max(num_classes, label_of(it) + 1);

  IndexSplit isplit =
      split_indices(items.size(), cfg.train_ratio, cfg.valid_ratio, cfg.test_ratio, cfg.seed);
  auto take = [&](const std::vector<std::int32_t>& rows) {
    std::vector<std::int32_t> out;
    out.reserve(rows.size());
    for (std::int32_t r : rows) out.push_back(items[static_cast<std::size_t>(r)]);
    return out;
  };
  std::vector<std::int32_t> train_items = take(isplit.train);
  std::vector<std::int32_t> valid_items = take(isplit.valid);
  std::vector<std::int32_t> test_items = take(isplit.test);

  Matrix x_cached;
  if (node_task) x_cached = ones_degree_features(*node_graph);

  TrainResult result;
  ModelDims dims;
  dims.kind = cfg.layer_kind;
  dims.layers = cfg.layers;
  dims.input_dim = 2;  // ones + degree
  dims.hidden = cfg.hidden;
  dims.head_input = pool.node_dim(cfg.hidden);
  dims.head_hidden = cfg.effective_head_hidden();
  dims.head_output = std::max<std::int32_t>(num_classes, 2);
  result.model = ModelParams::init(dims, mix_seed(cfg.seed, 0xA11));

  Adam opt(result.model, cfg.lr);
  std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, 0x5F));

  std::vector<std::int32_t> order = train_items;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    int epoch_batches = 0;
    for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t hi = std::min(order.size(), at + static_cast<std::size_t>(cfg.batch_size));

      Tape tape(result.model.num_slots());
      auto ids = register_params(tape, result.model);
      std::vector<Tape::ValueId> reps;
      std::vector<std::int32_t> batch_labels;
      if (node_task) {
        Tape::ValueId x_id = tape.constant(x_cached);
        Tape::ValueId h =
            gnn_forward_on_tape(tape, *node_graph, x_id, result.model, ids, &result.ledger);
        for (std::size_t i = at; i < hi; ++i) {
          reps.push_back(
              node_representation(tape, *node_graph, h, order[i], pool, &result.ledger));
          batch_labels.push_back(label_of(order[i]));
        }
      } else {
        for (std::size_t i = at; i < hi; ++i) {
          const Graph& gg = coll->graphs[static_cast<std::size_t>(order[i])];
          Tape::ValueId x_id = tape.constant(ones_degree_features(gg));
          Tape::ValueId h = gnn_forward_on_tape(tape, gg, x_id, result.model, ids, &result.ledger);
          reps.push_back(graph_representation(tape, gg, h, pool, &result.ledger));
          batch_labels.push_back(label_of(order[i]));
        }
      }
      Tape::ValueId logits = apply_head(tape, tape.stack_rows(std::move(reps)), result.model, ids);
      Tape::ValueId loss_id = tape.softmax_cross_entropy(logits, std::move(batch_labels));
      const double loss = tape.value(loss_id)(0, 0);
      check_finite_loss(loss, result.steps);
      result.step_losses.push_back(loss);
      epoch_loss += loss;
      ++epoch_batches;
      ++result.steps;
      opt.step(result.model, tape.backward(loss_id));
    }
    result.metrics.rows.push_back(
        {epoch, "train", "loss", epoch_loss / std::max(1, epoch_batches)});
    result.metrics.final_loss = epoch_loss / std::max(1, epoch_batches);

    if (!valid_items.empty() && cfg.eval_every > 0 && epoch % cfg.eval_every == 0) {
      Metrics vm = node_task ? evaluate_nodes(*node_graph, x_cached, result.model, pool,
                                              valid_items, *node_labels, &result.ledger)
                             : evaluate_graphs(*coll, result.model, pool, valid_items,
                                               &result.ledger);
      result.metrics.rows.push_back({epoch, "valid", "accuracy", vm.accuracy});
    }
  }

  if (!test_items.empty()) {
    Metrics tm = node_task ? evaluate_nodes(*node_graph, x_cached, result.model, pool, test_items,
                                            *node_labels, &result.ledger)
                           : evaluate_graphs(*coll, result.model, pool, test_items,
                                             &result.ledger);
    result.metrics.accuracy = tm.accuracy;
    result.metrics.rows.push_back({cfg.epochs, "test", "accuracy", tm.accuracy});
  }
  return result;
}

}  // namespace

TrainResult train_node(const Graph& g, const std::vector<std::int32_t>& labels,
                       const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.task != Task::kNode) throw std::invalid_argument("train_node: config task mismatch");
  if (labels.size() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("train_node: one label per node required (-1 = unlabeled)");
  return train_classifier(&g, &labels, nullptr, cfg);
}

TrainResult train_graph_classification(const GraphCollection& coll, const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.task != Task::kGraph)
    throw std::invalid_argument("train_graph_classification: config task mismatch");
  return train_classifier(nullptr, nullptr, &coll, cfg);
}

void save_checkpoint(const TrainConfig& cfg, const ModelParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out << "gdgnn-checkpoint v1\n";
  for (const auto& [k, v] : to_key_values(cfg)) out << k << " " << v << "\n";
  out << "[model]\n";
  save_params(params, out);
}

std::pair<TrainConfig, ModelParams> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "gdgnn-checkpoint v1")
    throw DataError("checkpoint: bad header in " + path);
  KeyValues kv;
  while (std::getline(in, line)) {
    if (line == "[model]") break;
    if (line.empty()) continue;
    auto sp = line.find(' ');
    if (sp == std::string::npos) throw DataError("checkpoint: bad config line `" + line + "`");
    kv[line.substr(0, sp)] = line.substr(sp + 1);
  }
  TrainConfig cfg = TrainConfig::from_key_values(kv);
  ModelParams params = load_params(in);
  return {cfg, params};
}

}  // namespace gdgnn
