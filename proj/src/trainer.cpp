#include "dlme/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "dlme/error.hpp"
#include "dlme/graph.hpp"

namespace dlme {

TrainMode train_mode_from_string(const std::string& s) {
  if (s == "dlme") return TrainMode::kDlme;
  if (s == "a1") return TrainMode::kA1;
  if (s == "a2") return TrainMode::kA2;
  if (s == "a3") return TrainMode::kA3;
  throw ConfigError("unknown training mode '" + s + "' (expected dlme|a1|a2|a3)");
}

std::string to_string(TrainMode m) {
  switch (m) {
    case TrainMode::kDlme: return "dlme";
    case TrainMode::kA1: return "a1";
    case TrainMode::kA2: return "a2";
    case TrainMode::kA3: return "a3";
  }
  return "dlme";
}

void TrainConfig::validate(int n, int input_dim) const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size <= 0 || batch_size > n) {
    throw ConfigError("batch_size must lie in [1, n]; n=" + std::to_string(n));
  }
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be nonnegative");
  if (knn_k < 1 || knn_k >= n) throw ConfigError("knn_k must lie in [1, n)");
  if (!(0.0 <= r_lo && r_lo <= r_hi && r_hi <= 1.0)) {
    throw ConfigError("augmentation r range must satisfy 0 <= r_lo <= r_hi <= 1");
  }
  loss_config().validate();
  MlpSpec f_resolved = f_spec.resolved(input_dim);
  if (mode != TrainMode::kA3) {
    if (g_spec.layer_dims.empty() || g_spec.layer_dims.front() != f_resolved.output_dim()) {
      throw ConfigError("g input dim must equal f output dim");
    }
    if (!(g_spec.output_dim() < f_resolved.output_dim())) {
      throw ConfigError("embedding dim d_z must be smaller than structure dim d_y");
    }
  }
}

LossConfig TrainConfig::loss_config() const {
  LossConfig lc;
  lc.alpha = alpha;
  lc.nu_y = nu_y;
  lc.nu_z = nu_z;
  lc.clamp_eps = clamp_eps;
  lc.gauss_sigma = gauss_sigma;
  switch (mode) {
    case TrainMode::kDlme: lc.mode = LossMode::kDlme; break;
    case TrainMode::kA1: lc.mode = LossMode::kAblationA1; break;
    case TrainMode::kA2: lc.mode = LossMode::kAblationA2; break;
    case TrainMode::kA3: lc.mode = LossMode::kContrastive; break;
  }
  return lc;
}

namespace {

// Single-network spec for the contrastive ablation: f's layers followed by
// g's, trained end to end as one MLP.
MlpSpec concat_specs(const MlpSpec& f, const MlpSpec& g) {
  MlpSpec out = f;
  for (std::size_t i = 1; i < g.layer_dims.size(); ++i) {
    out.layer_dims.push_back(g.layer_dims[i]);
  }
  return out;
}

struct StepContext {
  std::vector<Matrix*> params;
  std::vector<ad::NodeId> nodes;
};

void collect(StepContext& ctx, MlpParams& p, const MlpNodes& n) {
  for (int l = 0; l < p.num_layers(); ++l) {
    ctx.params.push_back(&p.weights[l]);
    ctx.nodes.push_back(n.weights[l]);
    ctx.params.push_back(&p.biases[l]);
    ctx.nodes.push_back(n.biases[l]);
  }
}

}  // namespace

TrainResult train(const Matrix& data, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const int n = data.rows();
  cfg.validate(n, data.cols());
  if (!data.all_finite()) throw ContractError("train: data contains non-finite values");

  TrainResult result;
  const bool single_net = cfg.mode == TrainMode::kA3;
  if (single_net) {
    result.f = init_mlp(concat_specs(cfg.f_spec, cfg.g_spec), data.cols(), cfg.seed);
    result.g = MlpParams{};
  } else {
    result.f = init_mlp(cfg.f_spec, data.cols(), cfg.seed);
    result.g = init_mlp(cfg.g_spec, result.f.spec.output_dim(), cfg.seed + 1);
  }

  const LossConfig loss_cfg = cfg.loss_config();
  const NeighborGraph graph = build_knn(data, cfg.knn_k);
  Rng rng(cfg.seed + 2);

  // One flat parameter list shared by the tape and the optimizer.
  std::vector<Matrix*> all_params;
  for (auto* net : {&result.f, &result.g}) {
    for (int l = 0; l < net->num_layers(); ++l) {
      all_params.push_back(&net->weights[l]);
      all_params.push_back(&net->biases[l]);
    }
  }
  AdamW optimizer({cfg.lr, cfg.weight_decay}, all_params);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (int step = 0; step < steps_per_epoch; ++step) {
      const int lo = step * cfg.batch_size;
      const int hi = std::min(n, lo + cfg.batch_size);
      const std::vector<int> anchors(order.begin() + lo, order.begin() + hi);
      const PairBatch batch = make_pair_batch(data, graph, anchors, rng, cfg.r_lo, cfg.r_hi);

      ad::Tape tape;
      const ad::NodeId x = tape.leaf(batch.views);
      StepContext ctx;
      ad::NodeId loss_node;

      const auto check_diverged = [&](ad::NodeId node) {
        if (!tape.value(node).all_finite()) {
          throw NumericError("training diverged: non-finite activations at epoch " +
                             std::to_string(epoch) + " step " + std::to_string(step));
        }
        return node;
      };

      if (single_net) {
        const MlpNodes fn = stage_params(tape, result.f);
        const ad::NodeId z = forward(tape, fn, result.f, x);
        const ad::NodeId dz = check_diverged(ad::pairwise_dist(tape, z));
        loss_node = contrastive_loss(tape, dz, batch.homology, loss_cfg, cfg.nu_z);
        collect(ctx, result.f, fn);
      } else {
        const MlpNodes fn = stage_params(tape, result.f);
        const MlpNodes gn = stage_params(tape, result.g);
        const ad::NodeId y = forward(tape, fn, result.f, x);
        if (cfg.mode == TrainMode::kDlme) {
          const ad::NodeId z = forward(tape, gn, result.g, y);
          const ad::NodeId dy = check_diverged(ad::pairwise_dist(tape, y));
          const ad::NodeId dz = check_diverged(ad::pairwise_dist(tape, z));
          loss_node = dlme_loss(tape, dy, dz, batch.homology, loss_cfg);
        } else {
          // Ablations A1/A2 split the model: f is trained by the
          // instance-discrimination loss in its own space, g matches
          // similarities against a detached copy of f's output.
          const ad::NodeId y_detached = ad::detach(tape, y);
          const ad::NodeId z = forward(tape, gn, result.g, y_detached);
          const ad::NodeId dy_detached = check_diverged(ad::pairwise_dist(tape, y_detached));
          const ad::NodeId dz = check_diverged(ad::pairwise_dist(tape, z));
          const ad::NodeId match = dlme_loss(tape, dy_detached, dz, batch.homology, loss_cfg);
          const ad::NodeId dy_live = check_diverged(ad::pairwise_dist(tape, y));
          const ad::NodeId cl =
              contrastive_loss(tape, dy_live, batch.homology, loss_cfg, cfg.nu_y);
          loss_node = ad::add(tape, match, cl);
        }
        collect(ctx, result.f, fn);
        collect(ctx, result.g, gn);
      }

      const double loss_value = tape.value(loss_node)(0, 0);
      if (!std::isfinite(loss_value)) {
        throw NumericError("training diverged: loss is not finite at epoch " +
                           std::to_string(epoch) + " step " + std::to_string(step));
      }
      loss_sum += loss_value;

      tape.backward(loss_node);
      std::vector<const Matrix*> grads;
      grads.reserve(ctx.nodes.size());
      for (const ad::NodeId id : ctx.nodes) grads.push_back(&tape.grad(id));
      optimizer.step(ctx.params, grads);
    }
    const auto t1 = std::chrono::steady_clock::now();
    EpochStat stat;
    stat.epoch = epoch;
    stat.mean_loss = loss_sum / steps_per_epoch;
    stat.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.history.push_back(stat);
    if (on_epoch) on_epoch(stat);
  }
  return result;
}

Matrix embed(const MlpParams& f, const MlpParams& g, const Matrix& data) {
  return forward_plain(g, forward_plain(f, data));
}

}  // namespace dlme
