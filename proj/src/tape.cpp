#include "gdgnn/tape.hpp"

#include <algorithm>
#include <cmath>

namespace gdgnn {

Reducer parse_reducer(const std::string& name) {
  if (name == "sum") return Reducer::kSum;
  if (name == "mean") return Reducer::kMean;
  if (name == "max") return Reducer::kMax;
  throw DataError("unknown reducer: " + name + " (expected sum|mean|max)");
}

std::string to_string(Reducer r) {
  switch (r) {
    case Reducer::kSum: return "sum";
    case Reducer::kMean: return "mean";
    case Reducer::kMax: return "max";
  }
  return "?";
}

Tape::ValueId Tape::push(Step step) {
  nodes_.push_back(std::move(step));
  return static_cast<ValueId>(nodes_.size() - 1);
}

Tape::ValueId Tape::constant(Matrix value) {
  Step s;
  s.op = Op::kConstant;
  s.value = std::move(value);
  return push(std::move(s));
}

Tape::ValueId Tape::param(int slot, const Matrix& value) {
  if (slot < 0 || static_cast<std::size_t>(slot) >= num_param_slots_)
    throw std::invalid_argument("tape: parameter slot out of range");
  Step s;
  s.op = Op::kParam;
  s.param_slot = slot;
  s.value = value;
  return push(std::move(s));
}

Tape::ValueId Tape::matmul(ValueId a, ValueId b) {
  Step s;
  s.op = Op::kMatMul;
  s.a = a;
  s.b = b;
  s.value = gdgnn::matmul(val(a), val(b));
  return push(std::move(s));
}

Tape::ValueId Tape::add_row_bias(ValueId a, ValueId bias) {
  const Matrix& x = val(a);
  const Matrix& b = val(bias);
  if (b.rows() != 1 || b.cols() != x.cols())
    throw std::invalid_argument("add_row_bias: bias must be 1 x cols(a)");
  Step s;
  s.op = Op::kAddRowBias;
  s.a = a;
  s.b = bias;
  s.value = x;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) s.value(r, c) += b(0, c);
  return push(std::move(s));
}

Tape::ValueId Tape::neighbor_sum(ValueId x, const Graph& g) {
  const Matrix& h = val(x);
  if (h.rows() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("neighbor_sum: row count must equal num_nodes");
  Step s;
  s.op = Op::kNeighborSum;
  s.a = x;
  s.graph = &g;
  s.value = Matrix(h.rows(), h.cols());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    double* out = s.value.row_ptr(static_cast<std::size_t>(v));
    for (NodeId u : g.neighbors(v)) {
      const double* in = h.row_ptr(static_cast<std::size_t>(u));
      for (std::size_t c = 0; c < h.cols(); ++c) out[c] += in[c];
    }
  }
  return push(std::move(s));
}

namespace {

Matrix gcn_apply(const Graph& g, const Matrix& h) {
  Matrix out(h.rows(), h.cols());
  std::vector<double> inv_sqrt(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    inv_sqrt[static_cast<std::size_t>(v)] = 1.0 / std::sqrt(1.0 + g.degree(v));
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double cv = inv_sqrt[static_cast<std::size_t>(v)];
    double* dst = out.row_ptr(static_cast<std::size_t>(v));
    const double* self = h.row_ptr(static_cast<std::size_t>(v));
    const double self_w = cv * cv;
    for (std::size_t c = 0; c < h.cols(); ++c) dst[c] += self_w * self[c];
    for (NodeId u : g.neighbors(v)) {
      const double w = cv * inv_sqrt[static_cast<std::size_t>(u)];
      const double* src = h.row_ptr(static_cast<std::size_t>(u));
      for (std::size_t c = 0; c < h.cols(); ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

}  // namespace

Tape::ValueId Tape::gcn_aggregate(ValueId x, const Graph& g) {
  const Matrix& h = val(x);
  if (h.rows() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("gcn_aggregate: row count must equal num_nodes");
  Step s;
  s.op = Op::kGcnAggregate;
  s.a = x;
  s.graph = &g;
  s.value = gcn_apply(g, h);
  return push(std::move(s));
}

Tape::ValueId Tape::gin_combine(ValueId x, ValueId nsum, ValueId eps) {
  const Matrix& h = val(x);
  const Matrix& ns = val(nsum);
  const Matrix& e = val(eps);
  if (!h.same_shape(ns)) throw std::invalid_argument("gin_combine: shape mismatch");
  if (e.rows() != 1 || e.cols() != 1) throw std::invalid_argument("gin_combine: eps must be 1x1");
  Step s;
  s.op = Op::kGinCombine;
  s.a = x;
  s.b = nsum;
  s.c = eps;
  s.value = Matrix(h.rows(), h.cols());
  const double scale = 1.0 + e(0, 0);
  for (std::size_t i = 0; i < h.size(); ++i)
    s.value.data()[i] = scale * h.data()[i] + ns.data()[i];
  return push(std::move(s));
}

Tape::ValueId Tape::relu(ValueId a) {
  Step s;
  s.op = Op::kRelu;
  s.a = a;
  s.value = val(a);
  for (double& x : s.value.data()) x = x > 0.0 ? x : 0.0;
  return push(std::move(s));
}

Tape::ValueId Tape::row_gather(ValueId a, std::vector<NodeId> rows) {
  const Matrix& x = val(a);
  Step s;
  s.op = Op::kRowGather;
  s.a = a;
  s.value = Matrix(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || static_cast<std::size_t>(rows[i]) >= x.rows())
      throw std::invalid_argument("row_gather: row index out of range");
    const double* src = x.row_ptr(static_cast<std::size_t>(rows[i]));
    std::copy(src, src + x.cols(), s.value.row_ptr(i));
  }
  s.rows = std::move(rows);
  return push(std::move(s));
}

Tape::ValueId Tape::reduce_rows(ValueId a, Reducer reducer) {
  const Matrix& x = val(a);
  Step s;
  s.op = Op::kReduceRows;
  s.a = a;
  s.reducer = reducer;
  s.value = Matrix(1, x.cols());
  if (x.rows() > 0) {
    switch (reducer) {
      case Reducer::kSum:
      case Reducer::kMean:
        for (std::size_t r = 0; r < x.rows(); ++r)
          for (std::size_t c = 0; c < x.cols(); ++c) s.value(0, c) += x(r, c);
        if (reducer == Reducer::kMean)
          for (double& v : s.value.data()) v /= static_cast<double>(x.rows());
        break;
      case Reducer::kMax:
        s.rows.assign(x.cols(), 0);  // argmax per column
        for (std::size_t c = 0; c < x.cols(); ++c) s.value(0, c) = x(0, c);
        for (std::size_t r = 1; r < x.rows(); ++r)
          for (std::size_t c = 0; c < x.cols(); ++c)
            if (x(r, c) > s.value(0, c)) {
              s.value(0, c) = x(r, c);
              s.rows[c] = static_cast<NodeId>(r);
            }
        break;
    }
  }
  return push(std::move(s));
}

Tape::ValueId Tape::concat_cols(ValueId a, ValueId b) {
  const Matrix& x = val(a);
  const Matrix& y = val(b);
  if (x.rows() != y.rows()) throw std::invalid_argument("concat_cols: row mismatch");
  Step s;
  s.op = Op::kConcatCols;
  s.a = a;
  s.b = b;
  s.value = Matrix(x.rows(), x.cols() + y.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy(x.row_ptr(r), x.row_ptr(r) + x.cols(), s.value.row_ptr(r));
    std::copy(y.row_ptr(r), y.row_ptr(r) + y.cols(), s.value.row_ptr(r) + x.cols());
  }
  return push(std::move(s));
}

Tape::ValueId Tape::stack_rows(std::vector<ValueId> parts) {
  if (parts.empty()) throw std::invalid_argument("stack_rows: no parts");
  std::size_t rows = 0;
  std::size_t cols = val(parts[0]).cols();
  for (ValueId p : parts) {
    if (val(p).cols() != cols) throw std::invalid_argument("stack_rows: column mismatch");
    rows += val(p).rows();
  }
  Step s;
  s.op = Op::kStackRows;
  s.list = std::move(parts);
  s.value = Matrix(rows, cols);
  std::size_t at = 0;
  for (ValueId p : s.list) {
    const Matrix& x = val(p);
    std::copy(x.data().begin(), x.data().end(), s.value.row_ptr(at));
    at += x.rows();
  }
  return push(std::move(s));
}

Tape::ValueId Tape::sigmoid_bce(ValueId logits, std::vector<double> targets) {
  const Matrix& z = val(logits);
  if (z.cols() != 1 || z.rows() != targets.size())
    throw std::invalid_argument("sigmoid_bce: logits must be B x 1 matching targets");
  Step s;
  s.op = Op::kSigmoidBce;
  s.a = logits;
  s.targets = std::move(targets);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const double zi = z(i, 0);
    // log(1 + e^z) - y*z, computed stably.
    loss += std::max(zi, 0.0) + std::log1p(std::exp(-std::abs(zi))) - s.targets[i] * zi;
  }
  s.value = Matrix(1, 1);
  s.value(0, 0) = loss / static_cast<double>(z.rows());
  return push(std::move(s));
}

Tape::ValueId Tape::softmax_cross_entropy(ValueId logits, std::vector<std::int32_t> labels) {
  const Matrix& z = val(logits);
  if (z.rows() != labels.size())
    throw std::invalid_argument("softmax_cross_entropy: label count mismatch");
  for (std::int32_t y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= z.cols())
      throw std::invalid_argument("softmax_cross_entropy: label out of range");
  Step s;
  s.op = Op::kSoftmaxCrossEntropy;
  s.a = logits;
  s.labels = std::move(labels);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    double zmax = z(i, 0);
    for (std::size_t c = 1; c < z.cols(); ++c) zmax = std::max(zmax, z(i, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < z.cols(); ++c) sum += std::exp(z(i, c) - zmax);
    loss += zmax + std::log(sum) - z(i, static_cast<std::size_t>(s.labels[i]));
  }
  s.value = Matrix(1, 1);
  s.value(0, 0) = loss / static_cast<double>(z.rows());
  return push(std::move(s));
}

std::vector<Matrix> Tape::backward(ValueId root) {
  Matrix seed(1, 1);
  seed(0, 0) = 1.0;
  return backward(root, seed);
}

std::vector<Matrix> Tape::backward(ValueId root, const Matrix& out_grad) {
  if (consumed_) throw std::logic_error("tape: record already consumed by backward");
  if (root < 0 || static_cast<std::size_t>(root) >= nodes_.size())
    throw std::invalid_argument("tape: bad root");
  if (!out_grad.same_shape(val(root)))
    throw std::invalid_argument("tape: out_grad shape must match root value");
  consumed_ = true;

  std::vector<Matrix> grad(nodes_.size());
  auto accum = [&](ValueId id, std::size_t r, std::size_t c, double g) {
    Matrix& m = grad[static_cast<std::size_t>(id)];
    if (m.empty()) m = Matrix::zeros_like(val(id));
    m(r, c) += g;
  };
  auto ensure = [&](ValueId id) -> Matrix& {
    Matrix& m = grad[static_cast<std::size_t>(id)];
    if (m.empty()) m = Matrix::zeros_like(val(id));
    return m;
  };
  grad[static_cast<std::size_t>(root)] = out_grad;

  for (std::size_t idx = static_cast<std::size_t>(root) + 1; idx-- > 0;) {
    const Step& s = nodes_[idx];
    const Matrix& g = grad[idx];
    if (g.empty()) continue;
    switch (s.op) {
      case Op::kConstant:
      case Op::kParam:
        break;
      case Op::kMatMul: {
        // dA = G B^T, dB = A^T G
        add_inplace(ensure(s.a), matmul_nt(g, val(s.b)));
        add_inplace(ensure(s.b), matmul_tn(val(s.a), g));
        break;
      }
      case Op::kAddRowBias: {
        add_inplace(ensure(s.a), g);
        Matrix& gb = ensure(s.b);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) gb(0, c) += g(r, c);
        break;
      }
      case Op::kNeighborSum: {
        // Adjacency is symmetric, so the adjoint is another neighbor sum.
        Matrix& gx = ensure(s.a);
        const Graph& gr = *s.graph;
        for (NodeId v = 0; v < gr.num_nodes(); ++v) {
          const double* src = g.row_ptr(static_cast<std::size_t>(v));
          for (NodeId u : gr.neighbors(v)) {
            double* dst = gx.row_ptr(static_cast<std::size_t>(u));
            for (std::size_t c = 0; c < g.cols(); ++c) dst[c] += src[c];
          }
        }
        break;
      }
      case Op::kGcnAggregate: {
        // The normalized operator is symmetric: adjoint = same operator.
        add_inplace(ensure(s.a), gcn_apply(*s.graph, g));
        break;
      }
      case Op::kGinCombine: {
        const double scale = 1.0 + val(s.c)(0, 0);
        Matrix& gx = ensure(s.a);
        Matrix& gn = ensure(s.b);
        double geps = 0.0;
        const Matrix& x = val(s.a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          gx.data()[i] += scale * g.data()[i];
          gn.data()[i] += g.data()[i];
          geps += g.data()[i] * x.data()[i];
        }
        accum(s.c, 0, 0, geps);
        break;
      }
      case Op::kRelu: {
        Matrix& gx = ensure(s.a);
        const Matrix& x = val(s.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (x.data()[i] > 0.0) gx.data()[i] += g.data()[i];
        break;
      }
      case Op::kRowGather: {
        Matrix& gx = ensure(s.a);
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
          double* dst = gx.row_ptr(static_cast<std::size_t>(s.rows[i]));
          const double* src = g.row_ptr(i);
          for (std::size_t c = 0; c < g.cols(); ++c) dst[c] += src[c];
        }
        break;
      }
      case Op::kReduceRows: {
        const Matrix& x = val(s.a);
        if (x.rows() == 0) break;
        Matrix& gx = ensure(s.a);
        switch (s.reducer) {
          case Reducer::kSum:
            for (std::size_t r = 0; r < x.rows(); ++r)
              for (std::size_t c = 0; c < x.cols(); ++c) gx(r, c) += g(0, c);
            break;
          case Reducer::kMean: {
            const double inv = 1.0 / static_cast<double>(x.rows());
            for (std::size_t r = 0; r < x.rows(); ++r)
              for (std::size_t c = 0; c < x.cols(); ++c) gx(r, c) += g(0, c) * inv;
            break;
          }
          case Reducer::kMax:
            for (std::size_t c = 0; c < x.cols(); ++c)
              gx(static_cast<std::size_t>(s.rows[c]), c) += g(0, c);
            break;
        }
        break;
      }
      case Op::kConcatCols: {
        Matrix& ga = ensure(s.a);
        Matrix& gb = ensure(s.b);
        for (std::size_t r = 0; r < g.rows(); ++r) {
          for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += g(r, c);
          for (std::size_t c = 0; c < gb.cols(); ++c) gb(r, c) += g(r, ga.cols() + c);
        }
        break;
      }
      case Op::kStackRows: {
        std::size_t at = 0;
        for (ValueId p : s.list) {
          Matrix& gp = ensure(p);
          for (std::size_t r = 0; r < gp.rows(); ++r)
            for (std::size_t c = 0; c < gp.cols(); ++c) gp(r, c) += g(at + r, c);
          at += gp.rows();
        }
        break;
      }
      case Op::kSigmoidBce: {
        const Matrix& z = val(s.a);
        Matrix& gz = ensure(s.a);
        const double scale = g(0, 0) / static_cast<double>(z.rows());
        for (std::size_t i = 0; i < z.rows(); ++i) {
          const double sig = 1.0 / (1.0 + std::exp(-z(i, 0)));
          gz(i, 0) += scale * (sig - s.targets[i]);
        }
        break;
      }
      case Op::kSoftmaxCrossEntropy: {
        const Matrix& z = val(s.a);
        Matrix& gz = ensure(s.a);
        const double scale = g(0, 0) / static_cast<double>(z.rows());
        for (std::size_t i = 0; i < z.rows(); ++i) {
          double zmax = z(i, 0);
          for (std::size_t c = 1; c < z.cols(); ++c) zmax = std::max(zmax, z(i, c));
          double sum = 0.0;
          for (std::size_t c = 0; c < z.cols(); ++c) sum += std::exp(z(i, c) - zmax);
          for (std::size_t c = 0; c < z.cols(); ++c) {
            const double p = std::exp(z(i, c) - zmax) / sum;
            gz(i, c) += scale * (p - (static_cast<std::size_t>(s.labels[i]) == c ? 1.0 : 0.0));
          }
        }
        break;
      }
    }
  }

  std::vector<Matrix> out(num_param_slots_);
  for (std::size_t idx = 0; idx < nodes_.size(); ++idx) {
    const Step& s = nodes_[idx];
    if (s.op != Op::kParam) continue;
    Matrix& slot = out[static_cast<std::size_t>(s.param_slot)];
    if (slot.empty()) slot = Matrix::zeros_like(s.value);
    if (!grad[idx].empty()) add_inplace(slot, grad[idx]);
  }
  return out;
}

}  // namespace gdgnn
