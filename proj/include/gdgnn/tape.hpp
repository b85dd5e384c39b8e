#pragma once

#include <cstdint>
#include <vector>

#include "gdgnn/graph.hpp"
#include "gdgnn/matrix.hpp"

namespace gdgnn {

enum class Reducer { kSum, kMean, kMax };

Reducer parse_reducer(const std::string& name);
std::string to_string(Reducer r);

// Replayable record of the forward computation. Every primitive step caches
// its activation; backward() walks the steps once in reverse and accumulates
// exact gradients into the parameter slots. A record can be consumed by
// backward exactly once.
class Tape {
 public:
  using ValueId = std::int32_t;

  explicit Tape(std::size_t num_param_slots) : num_param_slots_(num_param_slots) {}

  ValueId constant(Matrix value);
  ValueId param(int slot, const Matrix& value);

  ValueId matmul(ValueId a, ValueId b);
  // Adds a 1 x d bias row to every row of a.
  ValueId add_row_bias(ValueId a, ValueId bias);
  // y[v] = sum_{u in N(v)} x[u], neighbors in ascending order.
  ValueId neighbor_sum(ValueId x, const Graph& g);
  // Symmetric-normalized aggregation with self-connection:
  // y[v] = sum_{u in N(v) ∪ {v}} x[u] / sqrt((deg(u)+1)(deg(v)+1)).
  ValueId gcn_aggregate(ValueId x, const Graph& g);
  // y = (1 + eps) * x + nsum, eps a 1x1 parameter.
  ValueId gin_combine(ValueId x, ValueId nsum, ValueId eps);
  ValueId relu(ValueId a);
  // Selects rows of a (duplicates allowed).
  ValueId row_gather(ValueId a, std::vector<NodeId> rows);
  // k x d -> 1 x d. Reducing zero rows yields a zero row.
  ValueId reduce_rows(ValueId a, Reducer reducer);
  ValueId concat_cols(ValueId a, ValueId b);
  // Vertically stacks parts (heights may differ).
  ValueId stack_rows(std::vector<ValueId> parts);
  // Mean binary cross-entropy with logits; logits are B x 1 -> scalar (1x1).
  ValueId sigmoid_bce(ValueId logits, std::vector<double> targets);
  // Mean softmax cross-entropy; logits are B x C -> scalar (1x1).
  ValueId softmax_cross_entropy(ValueId logits, std::vector<std::int32_t> labels);

  const Matrix& value(ValueId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  bool consumed() const { return consumed_; }
  std::size_t num_steps() const { return nodes_.size(); }

  // Seeds the gradient of `root` with `out_grad` and returns d loss / d slot
  // for every parameter slot (zero matrices for untouched slots, shaped only
  // if the slot appeared on the tape).
  std::vector<Matrix> backward(ValueId root, const Matrix& out_grad);
  // Convenience for scalar roots: seeds with 1.
  std::vector<Matrix> backward(ValueId root);

 private:
  enum class Op {
    kConstant,
    kParam,
    kMatMul,
    kAddRowBias,
    kNeighborSum,
    kGcnAggregate,
    kGinCombine,
    kRelu,
    kRowGather,
    kReduceRows,
    kConcatCols,
    kStackRows,
    kSigmoidBce,
    kSoftmaxCrossEntropy,
  };

  struct Step {
    Op op;
    ValueId a = -1;
    ValueId b = -1;
    ValueId c = -1;
    std::vector<ValueId> list;
    Matrix value;
    const Graph* graph = nullptr;
    std::vector<NodeId> rows;
    Reducer reducer = Reducer::kSum;
    int param_slot = -1;
    std::vector<double> targets;
    std::vector<std::int32_t> labels;
  };

  ValueId push(Step step);
  const Matrix& val(ValueId id) const { return nodes_[static_cast<std::size_t>(id)].value; }

  std::size_t num_param_slots_;
  std::vector<Step> nodes_;
  bool consumed_ = false;
};

}  // namespace gdgnn
