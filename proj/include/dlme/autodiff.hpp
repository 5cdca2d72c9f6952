#pragma once

#include <array>
#include <vector>

#include "dlme/kernels.hpp"
#include "dlme/matrix.hpp"

namespace dlme::ad {

using NodeId = int;

enum class OpKind {
  kLeaf,
  kMatMul,
  kAdd,
  kAddRowVec,
  kMul,          // elementwise (Hadamard)
  kRelu,
  kLog,
  kAffine,       // k * x + b, elementwise with scalar k, b
  kClamp,
  kPairwiseDist,
  kTKernel,
  kGaussKernel,
  kSum,          // reduce to 1x1
  kDetach,       // identity value, zero gradient flow
};

// Reverse-mode record over Matrix operations. Nodes are appended in
// evaluation order, so parents always precede children; backward() walks the
// list once in reverse. Tapes are single-owner and not thread-safe.
class Tape {
 public:
  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::array<NodeId, 2> parents{-1, -1};
    Matrix value;
    Matrix grad;          // allocated lazily by backward()
    double attr0 = 0.0;   // op scalars: nu / sigma / clamp lo / affine scale
    double attr1 = 0.0;   // clamp hi / affine offset
  };

  NodeId leaf(Matrix value);

  const Matrix& value(NodeId id) const { return nodes_[id].value; }
  const Matrix& grad(NodeId id) const { return nodes_[id].grad; }
  int size() const { return static_cast<int>(nodes_.size()); }

  void zero_grad();
  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every ancestor.
  // The loss node must be 1x1.
  void backward(NodeId loss);

  // Op constructors. Each evaluates eagerly and records the node.
  friend NodeId matmul(Tape& t, NodeId a, NodeId b);
  friend NodeId add(Tape& t, NodeId a, NodeId b);
  friend NodeId add_rowvec(Tape& t, NodeId m, NodeId row);
  friend NodeId mul(Tape& t, NodeId a, NodeId b);
  friend NodeId relu(Tape& t, NodeId a);
  friend NodeId log_elem(Tape& t, NodeId a);
  friend NodeId affine(Tape& t, NodeId a, double scale, double offset);
  friend NodeId clamp(Tape& t, NodeId a, double lo, double hi);
  friend NodeId pairwise_dist(Tape& t, NodeId a);
  friend NodeId t_kernel_elem(Tape& t, NodeId d, double nu);
  friend NodeId gaussian_kernel_elem(Tape& t, NodeId d, double sigma);
  friend NodeId sum_all(Tape& t, NodeId a);
  friend NodeId detach(Tape& t, NodeId a);

 private:
  NodeId push(Node node);
  std::vector<Node> nodes_;
};

NodeId matmul(Tape& t, NodeId a, NodeId b);
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId add_rowvec(Tape& t, NodeId m, NodeId row);
NodeId mul(Tape& t, NodeId a, NodeId b);
NodeId relu(Tape& t, NodeId a);
NodeId log_elem(Tape& t, NodeId a);
NodeId affine(Tape& t, NodeId a, double scale, double offset);
NodeId clamp(Tape& t, NodeId a, double lo, double hi);
// n x d points -> n x n symmetric Euclidean distances, zero diagonal. The
// off-diagonal value is sqrt(max(sq, 1e-12)) so the sqrt derivative stays
// bounded at coincident points.
NodeId pairwise_dist(Tape& t, NodeId a);
NodeId t_kernel_elem(Tape& t, NodeId d, double nu);
NodeId gaussian_kernel_elem(Tape& t, NodeId d, double sigma);
NodeId sum_all(Tape& t, NodeId a);
NodeId detach(Tape& t, NodeId a);

}  // namespace dlme::ad
