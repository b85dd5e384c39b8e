#include "gdgnn/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace gdgnn {

LayerKind parse_layer_kind(const std::string& name) {
  if (name == "gcn") return LayerKind::kGcn;
  if (name == "gin") return LayerKind::kGin;
  throw DataError("unknown layer kind: " + name + " (expected gcn|gin)");
}

std::string to_string(LayerKind k) { return k == LayerKind::kGcn ? "gcn" : "gin"; }

namespace {

Matrix xavier(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> u(-a, a);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = u(rng);
  return m;
}

}  // namespace

ModelParams ModelParams::init(const ModelDims& dims, std::uint64_t seed) {
  if (dims.layers < 1 || dims.input_dim < 1 || dims.hidden < 1 || dims.head_hidden < 1 ||
      dims.head_output < 1 || dims.head_input < 1)
    throw std::invalid_argument("ModelParams::init: dimensions must be positive");
  ModelParams p;
  p.dims_ = dims;
  std::mt19937_64 rng(seed);
  const std::size_t d = static_cast<std::size_t>(dims.hidden);
  for (int l = 0; l < dims.layers; ++l) {
    const std::size_t in = l == 0 ? static_cast<std::size_t>(dims.input_dim) : d;
    if (dims.kind == LayerKind::kGcn) {
      p.slots_.push_back(xavier(in, d, rng));
      p.slots_.push_back(Matrix(1, d));
    } else {
      p.slots_.push_back(xavier(in, d, rng));
      p.slots_.push_back(Matrix(1, d));
      p.slots_.push_back(xavier(d, d, rng));
      p.slots_.push_back(Matrix(1, d));
      p.slots_.push_back(Matrix(1, 1));  // eps
    }
  }
  p.slots_.push_back(xavier(static_cast<std::size_t>(dims.head_input),
                            static_cast<std::size_t>(dims.head_hidden), rng));
  p.slots_.push_back(Matrix(1, static_cast<std::size_t>(dims.head_hidden)));
  p.slots_.push_back(xavier(static_cast<std::size_t>(dims.head_hidden),
                            static_cast<std::size_t>(dims.head_output), rng));
  p.slots_.push_back(Matrix(1, static_cast<std::size_t>(dims.head_output)));
  return p;
}

std::size_t ModelParams::layer_slot_base(int layer) const {
  return static_cast<std::size_t>(layer) * slots_per_layer();
}

std::size_t ModelParams::total_coords() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s.size();
  return n;
}

Matrix ones_features(const Graph& g) {
  return Matrix(static_cast<std::size_t>(g.num_nodes()), 1, 1.0);
}

Matrix ones_degree_features(const Graph& g) {
  Matrix x(static_cast<std::size_t>(g.num_nodes()), 2, 1.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    x(static_cast<std::size_t>(v), 1) = static_cast<double>(g.degree(v));
  return x;
}

std::vector<Tape::ValueId> register_params(Tape& tape, const ModelParams& params) {
  std::vector<Tape::ValueId> ids(params.num_slots());
  for (std::size_t i = 0; i < params.num_slots(); ++i)
    ids[i] = tape.param(static_cast<int>(i), params.slot(i));
  return ids;
}

namespace {

Tape::ValueId forward_layers(Tape& tape, const Graph& g, Tape::ValueId x_id,
                             const ModelParams& params, const std::vector<Tape::ValueId>& ids) {
  const ModelDims& dims = params.dims();
  Tape::ValueId h = x_id;
  for (int l = 0; l < dims.layers; ++l) {
    const std::size_t base = params.layer_slot_base(l);
    const bool last = l + 1 == dims.layers;
    if (dims.kind == LayerKind::kGcn) {
      h = tape.gcn_aggregate(h, g);
      h = tape.add_row_bias(tape.matmul(h, ids[base]), ids[base + 1]);
    } else {
      Tape::ValueId ns = tape.neighbor_sum(h, g);
      Tape::ValueId comb = tape.gin_combine(h, ns, ids[base + 4]);
      Tape::ValueId z = tape.relu(
          tape.add_row_bias(tape.matmul(comb, ids[base]), ids[base + 1]));
      h = tape.add_row_bias(tape.matmul(z, ids[base + 2]), ids[base + 3]);
    }
    if (!last) h = tape.relu(h);
  }
  return h;
}

}  // namespace

Tape::ValueId gnn_forward_on_tape(Tape& tape, const Graph& g, Tape::ValueId x_id,
                                  const ModelParams& params, RunLedger* ledger) {
  auto ids = register_params(tape, params);
  return gnn_forward_on_tape(tape, g, x_id, params, ids, ledger);
}

Tape::ValueId gnn_forward_on_tape(Tape& tape, const Graph& g, Tape::ValueId x_id,
                                  const ModelParams& params,
                                  const std::vector<Tape::ValueId>& param_ids,
                                  RunLedger* ledger) {
  if (tape.value(x_id).rows() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("gnn_forward: features must have one row per node");
  if (tape.value(x_id).cols() != static_cast<std::size_t>(params.dims().input_dim))
    throw std::invalid_argument("gnn_forward: feature width does not match params");
  Tape::ValueId h = forward_layers(tape, g, x_id, params, param_ids);
  if (ledger) ++ledger->gnn_forwards;
  return h;
}

ForwardResult gnn_forward(const Graph& g, const Matrix& x, const ModelParams& params,
                          RunLedger* ledger) {
  ForwardResult r;
  r.record = std::make_shared<Tape>(params.num_slots());
  Tape::ValueId x_id = r.record->constant(x.empty() ? ones_features(g) : x);
  r.embeddings = gnn_forward_on_tape(*r.record, g, x_id, params, ledger);
  return r;
}

Tape::ValueId apply_head(Tape& tape, Tape::ValueId x, const ModelParams& params,
                         const std::vector<Tape::ValueId>& ids) {
  const std::size_t base = params.head_slot_base();
  Tape::ValueId z = tape.relu(tape.add_row_bias(tape.matmul(x, ids[base]), ids[base + 1]));
  return tape.add_row_bias(tape.matmul(z, ids[base + 2]), ids[base + 3]);
}

FdCheckResult finite_difference_check(const ModelParams& params,
                                      const std::function<double(const ModelParams&)>& loss_value,
                                      const std::function<std::vector<Matrix>(const ModelParams&)>& loss_grads,
                                      double step, std::size_t min_coords, std::uint64_t seed) {
  std::vector<Matrix> analytic = loss_grads(params);

  std::vector<std::pair<std::size_t, std::size_t>> coords;  // (slot, flat index)
  for (std::size_t s = 0; s < params.num_slots(); ++s)
    for (std::size_t i = 0; i < params.slot(s).size(); ++i) coords.emplace_back(s, i);

  if (coords.size() > min_coords && min_coords > 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(std::max(min_coords, static_cast<std::size_t>(100)));
  }

  FdCheckResult result;
  ModelParams work = params;
  for (auto [s, i] : coords) {
    const double orig = work.slot(s).data()[i];
    work.slot(s).data()[i] = orig + step;
    const double up = loss_value(work);
    work.slot(s).data()[i] = orig - step;
    const double dn = loss_value(work);
    work.slot(s).data()[i] = orig;
    const double fd = (up - dn) / (2.0 * step);
    const double ad = analytic[s].empty() ? 0.0 : analytic[s].data()[i];
    const double rel = std::abs(fd - ad) / std::max({1.0, std::abs(fd), std::abs(ad)});
    result.max_rel_error = std::max(result.max_rel_error, rel);
    ++result.coords_checked;
  }
  return result;
}

void save_params(const ModelParams& params, std::ostream& out) {
  const ModelDims& d = params.dims();
  out << "gdgnn-model v1\n";
  out << "kind " << to_string(d.kind) << "\n";
  out << "layers " << d.layers << "\n";
  out << "input_dim " << d.input_dim << "\n";
  out << "hidden " << d.hidden << "\n";
  out << "head_input " << d.head_input << "\n";
  out << "head_hidden " << d.head_hidden << "\n";
  out << "head_output " << d.head_output << "\n";
  out << "slots " << params.num_slots() << "\n";
  out << std::hexfloat;
  for (std::size_t s = 0; s < params.num_slots(); ++s) {
    const Matrix& m = params.slot(s);
    out << "slot " << s << ' ' << m.rows() << ' ' << m.cols() << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c > 0) out << ' ';
        out << m(r, c);
      }
      out << "\n";
    }
  }
  out << std::defaultfloat;
}

namespace {

std::string expect_key(std::istream& in, const std::string& key) {
  std::string k, v;
  if (!(in >> k) || k != key) throw DataError("model checkpoint: expected key `" + key + "`");
  if (!(in >> v)) throw DataError("model checkpoint: missing value for `" + key + "`");
  return v;
}

}  // namespace

ModelParams load_params(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "gdgnn-model" || version != "v1")
    throw DataError("model checkpoint: bad header");
  ModelDims dims;
  dims.kind = parse_layer_kind(expect_key(in, "kind"));
  dims.layers = std::stoi(expect_key(in, "layers"));
  dims.input_dim = std::stoi(expect_key(in, "input_dim"));
  dims.hidden = std::stoi(expect_key(in, "hidden"));
  dims.head_input = std::stoi(expect_key(in, "head_input"));
  dims.head_hidden = std::stoi(expect_key(in, "head_hidden"));
  dims.head_output = std::stoi(expect_key(in, "head_output"));
  const std::size_t nslots = std::stoul(expect_key(in, "slots"));

  ModelParams p = ModelParams::init(dims, 0);
  if (p.num_slots() != nslots) throw DataError("model checkpoint: slot count mismatch");
  for (std::size_t s = 0; s < nslots; ++s) {
    std::string tag;
    std::size_t idx, rows, cols;
    if (!(in >> tag >> idx >> rows >> cols) || tag != "slot" || idx != s)
      throw DataError("model checkpoint: bad slot header");
    if (rows != p.slot(s).rows() || cols != p.slot(s).cols())
      throw DataError("model checkpoint: slot shape mismatch");
    for (std::size_t i = 0; i < rows * cols; ++i) {
      std::string tok;
      if (!(in >> tok)) throw DataError("model checkpoint: truncated slot data");
      p.slot(s).data()[i] = std::strtod(tok.c_str(), nullptr);
    }
  }
  return p;
}

}  // namespace gdgnn
