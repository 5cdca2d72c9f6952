#include "dlme/autodiff.hpp"

#include <cmath>
#include <string>

#include "dlme/error.hpp"

namespace dlme::ad {

namespace {

constexpr double kPairwiseSqFloor = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace

NodeId Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::leaf(Matrix value) {
  Node n;
  n.kind = OpKind::kLeaf;
  n.value = std::move(value);
  return push(std::move(n));
}

void Tape::zero_grad() {
  for (auto& n : nodes_) {
    if (!n.grad.empty()) n.grad.fill(0.0);
  }
}

NodeId matmul(Tape& t, NodeId a, NodeId b) {
  Tape::Node n;
  n.kind = OpKind::kMatMul;
  n.parents = {a, b};
  n.value = dlme::matmul(t.value(a), t.value(b));
  return t.push(std::move(n));
}

NodeId add(Tape& t, NodeId a, NodeId b) {
  require(t.value(a).same_shape(t.value(b)), "add: operand shapes differ");
  Tape::Node n;
  n.kind = OpKind::kAdd;
  n.parents = {a, b};
  n.value = t.value(a);
  add_inplace(n.value, t.value(b));
  return t.push(std::move(n));
}

NodeId add_rowvec(Tape& t, NodeId m, NodeId row) {
  const Matrix& mm = t.value(m);
  const Matrix& rr = t.value(row);
  require(rr.rows() == 1 && rr.cols() == mm.cols(), "add_rowvec: row vector shape mismatch");
  Tape::Node n;
  n.kind = OpKind::kAddRowVec;
  n.parents = {m, row};
  n.value = mm;
  for (int i = 0; i < mm.rows(); ++i) {
    double* out = n.value.row(i);
    const double* r = rr.data();
    for (int j = 0; j < mm.cols(); ++j) out[j] += r[j];
  }
  return t.push(std::move(n));
}

NodeId mul(Tape& t, NodeId a, NodeId b) {
  require(t.value(a).same_shape(t.value(b)), "mul: operand shapes differ");
  Tape::Node n;
  n.kind = OpKind::kMul;
  n.parents = {a, b};
  n.value = t.value(a);
  double* out = n.value.data();
  const double* pb = t.value(b).data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] *= pb[i];
  return t.push(std::move(n));
}

NodeId relu(Tape& t, NodeId a) {
  Tape::Node n;
  n.kind = OpKind::kRelu;
  n.parents = {a, -1};
  n.value = t.value(a);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
  return t.push(std::move(n));
}

NodeId log_elem(Tape& t, NodeId a) {
  Tape::Node n;
  n.kind = OpKind::kLog;
  n.parents = {a, -1};
  n.value = t.value(a);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] = std::log(out[i]);
  return t.push(std::move(n));
}

NodeId affine(Tape& t, NodeId a, double scale, double offset) {
  Tape::Node n;
  n.kind = OpKind::kAffine;
  n.parents = {a, -1};
  n.attr0 = scale;
  n.attr1 = offset;
  n.value = t.value(a);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] = scale * out[i] + offset;
  return t.push(std::move(n));
}

NodeId clamp(Tape& t, NodeId a, double lo, double hi) {
  require(lo < hi, "clamp: lo must be < hi");
  Tape::Node n;
  n.kind = OpKind::kClamp;
  n.parents = {a, -1};
  n.attr0 = lo;
  n.attr1 = hi;
  n.value = t.value(a);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    out[i] = out[i] < lo ? lo : (out[i] > hi ? hi : out[i]);
  }
  return t.push(std::move(n));
}

NodeId pairwise_dist(Tape& t, NodeId a) {
  const Matrix& x = t.value(a);
  const int n = x.rows(), d = x.cols();
  Tape::Node node;
  node.kind = OpKind::kPairwiseDist;
  node.parents = {a, -1};
  node.value = Matrix(n, n, 0.0);
  Matrix& out = node.value;
#pragma omp parallel for schedule(static) if (n > 64)
  for (int i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double* xj = x.row(j);
      double sq = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        sq += diff * diff;
      }
      out(i, j) = std::sqrt(std::max(sq, kPairwiseSqFloor));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(i, j) = out(j, i);
  return t.push(std::move(node));
}

NodeId t_kernel_elem(Tape& t, NodeId d, double nu) {
  const KernelParams p = KernelParams::make(nu);
  Tape::Node n;
  n.kind = OpKind::kTKernel;
  n.parents = {d, -1};
  n.attr0 = nu;
  n.value = t.value(d);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] = t_kernel(out[i], p);
  return t.push(std::move(n));
}

NodeId gaussian_kernel_elem(Tape& t, NodeId d, double sigma) {
  Tape::Node n;
  n.kind = OpKind::kGaussKernel;
  n.parents = {d, -1};
  n.attr0 = sigma;
  n.value = t.value(d);
  double* out = n.value.data();
  for (std::size_t i = 0; i < n.value.size(); ++i) out[i] = gaussian_kernel(out[i], sigma);
  return t.push(std::move(n));
}

NodeId sum_all(Tape& t, NodeId a) {
  Tape::Node n;
  n.kind = OpKind::kSum;
  n.parents = {a, -1};
  n.value = Matrix(1, 1, dlme::sum(t.value(a)));
  return t.push(std::move(n));
}

NodeId detach(Tape& t, NodeId a) {
  Tape::Node n;
  n.kind = OpKind::kDetach;
  n.parents = {a, -1};
  n.value = t.value(a);
  return t.push(std::move(n));
}

void Tape::backward(NodeId loss) {
  if (loss < 0 || loss >= size()) throw ContractError("backward: invalid node id");
  Node& ln = nodes_[loss];
  if (ln.value.rows() != 1 || ln.value.cols() != 1) {
    throw ContractError("backward: loss node must be a 1x1 scalar");
  }
  for (auto& n : nodes_) {
    if (n.grad.empty()) n.grad = Matrix(n.value.rows(), n.value.cols(), 0.0);
  }
  ln.grad(0, 0) += 1.0;

  for (NodeId id = loss; id >= 0; --id) {
    Node& n = nodes_[id];
    const Matrix& g = n.grad;
    switch (n.kind) {
      case OpKind::kLeaf:
      case OpKind::kDetach:
        break;
      case OpKind::kMatMul: {
        Node& pa = nodes_[n.parents[0]];
        Node& pb = nodes_[n.parents[1]];
        add_inplace(pa.grad, matmul_a_bt(g, pb.value));
        add_inplace(pb.grad, matmul_at_b(pa.value, g));
        break;
      }
      case OpKind::kAdd: {
        add_inplace(nodes_[n.parents[0]].grad, g);
        add_inplace(nodes_[n.parents[1]].grad, g);
        break;
      }
      case OpKind::kAddRowVec: {
        add_inplace(nodes_[n.parents[0]].grad, g);
        Matrix& rg = nodes_[n.parents[1]].grad;
        for (int i = 0; i < g.rows(); ++i) {
          const double* gi = g.row(i);
          double* r = rg.data();
          for (int j = 0; j < g.cols(); ++j) r[j] += gi[j];
        }
        break;
      }
      case OpKind::kMul: {
        Node& pa = nodes_[n.parents[0]];
        Node& pb = nodes_[n.parents[1]];
        double* ga = pa.grad.data();
        double* gb = pb.grad.data();
        const double* va = pa.value.data();
        const double* vb = pb.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[i] += gg[i] * vb[i];
          gb[i] += gg[i] * va[i];
        }
        break;
      }
      case OpKind::kRelu: {
        Node& pa = nodes_[n.parents[0]];
        double* ga = pa.grad.data();
        const double* va = pa.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (va[i] > 0.0) ga[i] += gg[i];
        }
        break;
      }
      case OpKind::kLog: {
        Node& pa = nodes_[n.parents[0]];
        double* ga = pa.grad.data();
        const double* va = pa.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += gg[i] / va[i];
        break;
      }
      case OpKind::kAffine: {
        axpy_inplace(nodes_[n.parents[0]].grad, n.attr0, g);
        break;
      }
      case OpKind::kClamp: {
        Node& pa = nodes_[n.parents[0]];
        double* ga = pa.grad.data();
        const double* va = pa.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (va[i] >= n.attr0 && va[i] <= n.attr1) ga[i] += gg[i];
        }
        break;
      }
      case OpKind::kPairwiseDist: {
        Node& pa = nodes_[n.parents[0]];
        const Matrix& x = pa.value;
        Matrix& gx = pa.grad;
        const Matrix& dist = n.value;
        const int rows = x.rows(), dims = x.cols();
#pragma omp parallel for schedule(static) if (rows > 64)
        for (int i = 0; i < rows; ++i) {
          double* gi = gx.row(i);
          const double* xi = x.row(i);
          for (int j = 0; j < rows; ++j) {
            if (j == i) continue;
            const double w = (g(i, j) + g(j, i)) / dist(i, j);
            const double* xj = x.row(j);
            for (int k = 0; k < dims; ++k) gi[k] += w * (xi[k] - xj[k]);
          }
        }
        break;
      }
      case OpKind::kTKernel: {
        const KernelParams p = KernelParams::make(n.attr0);
        Node& pa = nodes_[n.parents[0]];
        double* ga = pa.grad.data();
        const double* va = pa.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[i] += gg[i] * t_kernel_derivative(va[i], p);
        }
        break;
      }
      case OpKind::kGaussKernel: {
        Node& pa = nodes_[n.parents[0]];
        double* ga = pa.grad.data();
        const double* va = pa.value.data();
        const double* gg = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[i] += gg[i] * gaussian_kernel_derivative(va[i], n.attr0);
        }
        break;
      }
      case OpKind::kSum: {
        Node& pa = nodes_[n.parents[0]];
        const double gv = g(0, 0);
        double* ga = pa.grad.data();
        for (std::size_t i = 0; i < pa.grad.size(); ++i) ga[i] += gv;
        break;
      }
    }
  }
}

}  // namespace dlme::ad
