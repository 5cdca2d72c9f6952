#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlme/autodiff.hpp"
#include "dlme/matrix.hpp"

namespace dlme {

// Layer widths of an MLP. A leading -1 is a sentinel replaced by the input
// dimension when the network is built.
struct MlpSpec {
  std::vector<int> layer_dims;

  // Returns a copy with the sentinel resolved; validates the chain.
  MlpSpec resolved(int input_dim) const;
  int output_dim() const { return layer_dims.back(); }
};

// Weights are stored (in x out); biases are 1 x out row vectors.
struct MlpParams {
  MlpSpec spec;
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;

  int num_layers() const { return static_cast<int>(weights.size()); }
  bool empty() const { return weights.empty(); }
  int input_dim() const { return weights.empty() ? 0 : weights.front().rows(); }
  int output_dim() const { return weights.empty() ? 0 : weights.back().cols(); }
};

// Kaiming-uniform init (bound sqrt(6 / fan_in)), zero biases, deterministic
// per seed.
MlpParams init_mlp(const MlpSpec& spec, int input_dim, std::uint64_t seed);

// Tape handles for one network's parameters inside a training step.
struct MlpNodes {
  std::vector<ad::NodeId> weights;
  std::vector<ad::NodeId> biases;
};

MlpNodes stage_params(ad::Tape& tape, const MlpParams& params);

// Affine + ReLU per hidden layer, affine-only final layer, recorded on tape.
ad::NodeId forward(ad::Tape& tape, const MlpNodes& nodes, const MlpParams& params, ad::NodeId x);

// Tape-free forward pass for inference.
Matrix forward_plain(const MlpParams& params, const Matrix& x);

// JSON checkpoint of an (f, g) network pair; layout documented in the README.
void save_checkpoint(const std::string& path, const MlpParams& f, const MlpParams& g);
void load_checkpoint(const std::string& path, MlpParams& f, MlpParams& g);

}  // namespace dlme
