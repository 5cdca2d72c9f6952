#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dlme/datasets.hpp"
#include "dlme/error.hpp"
#include "dlme/graph.hpp"
#include "dlme/optim.hpp"
#include "dlme/trainer.hpp"

using namespace dlme;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 32;
  cfg.knn_k = 4;
  cfg.f_spec = MlpSpec{{-1, 16, 8}};
  cfg.g_spec = MlpSpec{{8, 12, 2}};
  cfg.seed = 7;
  return cfg;
}

bool params_equal(const MlpParams& a, const MlpParams& b) {
  if (a.num_layers() != b.num_layers()) return false;
  for (int l = 0; l < a.num_layers(); ++l) {
    if (!(a.weights[l] == b.weights[l]) || !(a.biases[l] == b.biases[l])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("AdamW: zero gradient moves a parameter only by decoupled decay") {
  Matrix w{{2.0, -4.0}, {0.5, 1.0}};
  const Matrix w0 = w;
  const Matrix zero(2, 2, 0.0);
  AdamW::Config cfg;
  cfg.lr = 0.01;
  cfg.weight_decay = 0.1;
  AdamW opt(cfg, {&w});
  opt.step({&w}, {&zero});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(w(i, j) == doctest::Approx(w0(i, j) * (1.0 - cfg.lr * cfg.weight_decay))
                           .epsilon(1e-15));
    }
  }
}

TEST_CASE("AdamW: first step size is approximately lr in each coordinate") {
  Matrix w(1, 3, 0.0);
  Matrix g{{0.3, -2.0, 1e-4}};
  AdamW::Config cfg;
  cfg.lr = 1e-3;
  cfg.weight_decay = 0.0;
  AdamW opt(cfg, {&w});
  opt.step({&w}, {&g});
  for (int j = 0; j < 3; ++j) {
    const double expect = -cfg.lr * g(0, j) / (std::abs(g(0, j)) + 1e-8);
    CHECK(w(0, j) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("zero epochs returns the initialization unchanged") {
  const Dataset ds = gen_swiss_roll(100, 0.05, 3);
  TrainConfig cfg = small_config();
  cfg.epochs = 0;
  const TrainResult res = train(ds.X, cfg);
  const MlpParams f0 = init_mlp(cfg.f_spec, ds.X.cols(), cfg.seed);
  const MlpParams g0 = init_mlp(cfg.g_spec, f0.spec.output_dim(), cfg.seed + 1);
  CHECK(params_equal(res.f, f0));
  CHECK(params_equal(res.g, g0));
  CHECK(res.history.empty());
}

TEST_CASE("training is deterministic per seed") {
  const Dataset ds = gen_swiss_roll(120, 0.05, 5);
  const TrainConfig cfg = small_config();
  const TrainResult a = train(ds.X, cfg);
  const TrainResult b = train(ds.X, cfg);
  CHECK(params_equal(a.f, b.f));
  CHECK(params_equal(a.g, b.g));
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].mean_loss == b.history[e].mean_loss);
  }

  TrainConfig other = cfg;
  other.seed = 8;
  const TrainResult c = train(ds.X, other);
  CHECK(!params_equal(a.f, c.f));
}

TEST_CASE("loss history is finite and decreases on the twain swiss roll") {
  const Dataset ds = gen_twain_swiss_roll(360, kTwainDefaultGap, 0.05, 11);
  TrainConfig cfg = small_config();
  cfg.epochs = 25;
  cfg.batch_size = 64;
  const Matrix x = isotropic_scale(ds.X);
  const TrainResult res = train(x, cfg);
  REQUIRE(res.history.size() == 25);
  for (const auto& stat : res.history) CHECK(std::isfinite(stat.mean_loss));
  CHECK(res.history.back().mean_loss < res.history.front().mean_loss);
}

TEST_CASE("embed composes the two forwards and maps rows pointwise") {
  const Dataset ds = gen_swiss_roll(80, 0.05, 13);
  TrainConfig cfg = small_config();
  cfg.epochs = 2;
  const TrainResult res = train(ds.X, cfg);
  const Matrix z = embed(res.f, res.g, ds.X);
  CHECK(z.rows() == 80);
  CHECK(z.cols() == 2);
  CHECK(z == forward_plain(res.g, forward_plain(res.f, ds.X)));

  // A duplicated input row embeds to a duplicated output row.
  Matrix two(2, ds.X.cols());
  for (int c = 0; c < ds.X.cols(); ++c) two(0, c) = two(1, c) = ds.X(17, c);
  const Matrix z2 = embed(res.f, res.g, two);
  for (int c = 0; c < 2; ++c) CHECK(z2(0, c) == z2(1, c));
}

TEST_CASE("single-network contrastive ablation") {
  const Dataset ds = gen_swiss_roll(96, 0.05, 17);
  TrainConfig cfg = small_config();
  cfg.mode = TrainMode::kA3;
  cfg.epochs = 1;
  cfg.batch_size = 96;
  const TrainResult res = train(ds.X, cfg);
  CHECK(res.g.empty());
  // f is the concatenation of both specs: 3 -> 16 -> 8 -> 12 -> 2.
  CHECK(res.f.spec.layer_dims == std::vector<int>{3, 16, 8, 12, 2});
  CHECK(embed(res.f, res.g, ds.X).cols() == 2);

  // The recorded first loss equals an independent contrastive evaluation of
  // the very first batch at the initial parameters.
  const MlpParams net0 = init_mlp(res.f.spec, 3, cfg.seed);
  const NeighborGraph graph = build_knn(ds.X, cfg.knn_k);
  Rng rng(cfg.seed + 2);
  std::vector<int> order(96);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const PairBatch batch = make_pair_batch(ds.X, graph, order, rng, cfg.r_lo, cfg.r_hi);
  ad::Tape t;
  const MlpNodes nodes = stage_params(t, net0);
  const ad::NodeId z = forward(t, nodes, net0, t.leaf(batch.views));
  const double expect = t.value(contrastive_loss(t, ad::pairwise_dist(t, z), batch.homology,
                                                 cfg.loss_config(), cfg.nu_z))(0, 0);
  CHECK(res.history.front().mean_loss == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("detached-structure ablations run and keep both networks") {
  const Dataset ds = gen_swiss_roll(80, 0.05, 19);
  for (TrainMode mode : {TrainMode::kA1, TrainMode::kA2}) {
    TrainConfig cfg = small_config();
    cfg.mode = mode;
    cfg.epochs = 3;
    const TrainResult res = train(ds.X, cfg);
    CHECK(!res.g.empty());
    CHECK(res.history.size() == 3);
    for (const auto& s : res.history) CHECK(std::isfinite(s.mean_loss));
  }
}

TEST_CASE("divergence guard aborts with a numeric error") {
  const Dataset ds = gen_swiss_roll(64, 0.05, 23);
  TrainConfig cfg = small_config();
  cfg.epochs = 3;
  cfg.lr = 1e100;
  CHECK_THROWS_AS(train(ds.X, cfg), NumericError);
}

TEST_CASE("config validation rejects bad setups before compute") {
  const Dataset ds = gen_swiss_roll(50, 0.05, 29);
  TrainConfig cfg = small_config();
  cfg.batch_size = 51;
  CHECK_THROWS_AS(train(ds.X, cfg), ConfigError);

  cfg = small_config();
  cfg.nu_y = 5.0;
  cfg.nu_z = 50.0;  // must be nu_y > nu_z
  CHECK_THROWS_AS(train(ds.X, cfg), ConfigError);

  cfg = small_config();
  cfg.g_spec = MlpSpec{{8, 12, 9}};  // d_z must stay below d_y
  CHECK_THROWS_AS(train(ds.X, cfg), ConfigError);

  cfg = small_config();
  cfg.lr = 0.0;
  CHECK_THROWS_AS(train(ds.X, cfg), ConfigError);
}
