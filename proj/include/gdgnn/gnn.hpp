#pragma once

#include <functional>
#include <iosfwd>
#include <memory>

#include "gdgnn/graph.hpp"
#include "gdgnn/ledger.hpp"
#include "gdgnn/matrix.hpp"
#include "gdgnn/tape.hpp"

namespace gdgnn {

enum class LayerKind { kGcn, kGin };

LayerKind parse_layer_kind(const std::string& name);
std::string to_string(LayerKind k);

struct ModelDims {
  LayerKind kind = LayerKind::kGcn;
  int layers = 2;       // message-passing depth T
  int input_dim = 1;    // feature width f
  int hidden = 32;      // embedding width d
  int head_input = 0;   // task representation width fed to the head
  int head_hidden = 32;
  int head_output = 1;  // 1 logit for link scoring, C for classification

  bool operator==(const ModelDims&) const = default;
};

// Flat parameter store. Per GCN layer: [W, b]; per GIN layer:
// [W1, b1, W2, b2, eps]; then the two-layer head [Wh1, bh1, Wh2, bh2].
class ModelParams {
 public:
  ModelParams() = default;
  static ModelParams init(const ModelDims& dims, std::uint64_t seed);

  const ModelDims& dims() const { return dims_; }
  std::size_t num_slots() const { return slots_.size(); }
  Matrix& slot(std::size_t i) { return slots_[i]; }
  const Matrix& slot(std::size_t i) const { return slots_[i]; }

  std::size_t layer_slot_base(int layer) const;
  std::size_t slots_per_layer() const { return dims_.kind == LayerKind::kGcn ? 2 : 5; }
  std::size_t head_slot_base() const { return layer_slot_base(dims_.layers); }

  std::size_t total_coords() const;

  bool operator==(const ModelParams&) const = default;

 private:
  ModelDims dims_;
  std::vector<Matrix> slots_;
};

// All-ones column, the fallback input when a graph carries no features.
Matrix ones_features(const Graph& g);
// [1, deg(v)] per node, the structure-only trainer input.
Matrix ones_degree_features(const Graph& g);

// One message-passing pass over the whole graph, recorded on a fresh tape so
// downstream pooling and heads can extend it. Increments the ledger's
// gnn_forwards exactly once per call.
struct ForwardResult {
  std::shared_ptr<Tape> record;
  Tape::ValueId embeddings = -1;

  const Matrix& values() const { return record->value(embeddings); }
};

ForwardResult gnn_forward(const Graph& g, const Matrix& x, const ModelParams& params,
                          RunLedger* ledger = nullptr);

// Same pass appended to an existing tape (x_id already on it).
Tape::ValueId gnn_forward_on_tape(Tape& tape, const Graph& g, Tape::ValueId x_id,
                                  const ModelParams& params, RunLedger* ledger = nullptr);

// Variant for callers that already registered the parameter slots and want
// to reuse their value ids (heads, multi-graph batches).
Tape::ValueId gnn_forward_on_tape(Tape& tape, const Graph& g, Tape::ValueId x_id,
                                  const ModelParams& params,
                                  const std::vector<Tape::ValueId>& param_ids,
                                  RunLedger* ledger = nullptr);

// Registers every parameter slot on the tape and returns the value ids,
// indexed by slot.
std::vector<Tape::ValueId> register_params(Tape& tape, const ModelParams& params);

// Two-layer perceptron head: relu(x Wh1 + bh1) Wh2 + bh2.
Tape::ValueId apply_head(Tape& tape, Tape::ValueId x, const ModelParams& params,
                         const std::vector<Tape::ValueId>& param_ids);

// Central-difference gradient check. Perturbs every parameter coordinate, or
// a seeded random subset of at least min_coords when the model is larger.
// Relative error uses denominator max(1, |fd|, |ad|).
struct FdCheckResult {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
};

FdCheckResult finite_difference_check(const ModelParams& params,
                                      const std::function<double(const ModelParams&)>& loss_value,
                                      const std::function<std::vector<Matrix>(const ModelParams&)>& loss_grads,
                                      double step = 1e-5, std::size_t min_coords = 100,
                                      std::uint64_t seed = 0);

// Versioned structured-text dump; doubles are written as hexfloats so the
// 64-bit round trip is bit-exact.
void save_params(const ModelParams& params, std::ostream& out);
ModelParams load_params(std::istream& in);

}  // namespace gdgnn
