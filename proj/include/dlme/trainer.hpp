#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dlme/loss.hpp"
#include "dlme/network.hpp"
#include "dlme/optim.hpp"

namespace dlme {

enum class TrainMode { kDlme, kA1, kA2, kA3 };

TrainMode train_mode_from_string(const std::string& s);
std::string to_string(TrainMode m);

// Every knob of a training run. Defaults are the library defaults used by the
// CLI; see the README for their rationale.
struct TrainConfig {
  int epochs = 300;
  int batch_size = 256;
  double lr = 1e-3;
  double weight_decay = 1e-6;
  double alpha = 0.1;
  double nu_y = 100.0;
  double nu_z = 10.0;
  double clamp_eps = 1e-7;
  double gauss_sigma = 1.0;
  int knn_k = 5;
  double r_lo = 0.5;
  double r_hi = 1.0;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::kDlme;
  MlpSpec f_spec{{-1, 500, 300, 80}};
  MlpSpec g_spec{{80, 500, 80, 2}};

  // Throws ConfigError before any compute if the run cannot be valid.
  void validate(int n, int input_dim) const;
  LossConfig loss_config() const;
};

struct EpochStat {
  int epoch = 0;
  double mean_loss = 0.0;
  double wall_ms = 0.0;
};

struct TrainResult {
  MlpParams f;
  MlpParams g;  // empty (identity) for the single-network ablation
  std::vector<EpochStat> history;
};

using EpochCallback = std::function<void(const EpochStat&)>;

// Runs the full two-network training loop: per step, sample a pair batch,
// map it through f and g, take pairwise distances in both latent spaces,
// match their kernel similarities and apply one AdamW update to all
// parameters. Fully deterministic per seed. Aborts with NumericError if the
// loss stops being finite.
TrainResult train(const Matrix& data, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// z_i = g(f(x_i)) row by row, without augmentation.
Matrix embed(const MlpParams& f, const MlpParams& g, const Matrix& data);

}  // namespace dlme
