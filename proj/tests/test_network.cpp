#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "dlme/error.hpp"
#include "dlme/network.hpp"

using namespace dlme;

TEST_CASE("init is deterministic and bounded, biases zero") {
  const MlpSpec spec{{-1, 20, 5}};
  const MlpParams a = init_mlp(spec, 10, 42);
  const MlpParams b = init_mlp(spec, 10, 42);
  for (int l = 0; l < a.num_layers(); ++l) {
    CHECK(a.weights[l] == b.weights[l]);
    CHECK(a.biases[l] == b.biases[l]);
    for (std::size_t i = 0; i < a.biases[l].size(); ++i) {
      CHECK(a.biases[l].data()[i] == 0.0);
    }
  }
  const double bound = std::sqrt(6.0 / 10.0);
  for (std::size_t i = 0; i < a.weights[0].size(); ++i) {
    CHECK(std::abs(a.weights[0].data()[i]) <= bound);
  }
  const MlpParams c = init_mlp(spec, 10, 43);
  CHECK(!(a.weights[0] == c.weights[0]));
}

TEST_CASE("sentinel resolution and validation") {
  const MlpSpec spec{{-1, 4, 2}};
  CHECK(spec.resolved(7).layer_dims[0] == 7);
  const MlpSpec too_short{{3}};
  const MlpSpec zero_dim{{-1, 0, 2}};
  const MlpSpec wrong_input{{5, 4, 2}};
  CHECK_THROWS_AS(too_short.resolved(3), ContractError);
  CHECK_THROWS_AS(zero_dim.resolved(3), ContractError);
  CHECK_THROWS_AS(wrong_input.resolved(3), DimensionError);
}

TEST_CASE("forward: zero params give zero output; single layer is affine") {
  MlpParams p = init_mlp(MlpSpec{{-1, 3, 2}}, 4, 1);
  for (auto& w : p.weights) w.fill(0.0);
  Rng rng(5);
  const Matrix x = uniform_matrix(6, 4, -1.0, 1.0, rng);
  const Matrix out = forward_plain(p, x);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == 0.0);

  // One linear layer equals matmul plus bias.
  MlpParams lin = init_mlp(MlpSpec{{-1, 2}}, 4, 2);
  Rng rng2(6);
  lin.biases[0] = uniform_matrix(1, 2, -1.0, 1.0, rng2);
  const Matrix got = forward_plain(lin, x);
  const Matrix mm = matmul(x, lin.weights[0]);
  for (int i = 0; i < got.rows(); ++i) {
    for (int j = 0; j < got.cols(); ++j) {
      CHECK(got(i, j) == doctest::Approx(mm(i, j) + lin.biases[0](0, j)).epsilon(1e-14));
    }
  }
}

TEST_CASE("taped forward equals plain forward and composes to d_z columns") {
  Rng rng(7);
  const Matrix x = uniform_matrix(5, 6, -1.0, 1.0, rng);
  const MlpParams f = init_mlp(MlpSpec{{-1, 8, 4}}, 6, 3);
  const MlpParams g = init_mlp(MlpSpec{{4, 5, 2}}, 4, 4);

  ad::Tape tape;
  const ad::NodeId xn = tape.leaf(x);
  const MlpNodes fn = stage_params(tape, f);
  const MlpNodes gn = stage_params(tape, g);
  const ad::NodeId y = forward(tape, fn, f, xn);
  const ad::NodeId z = forward(tape, gn, g, y);

  CHECK(tape.value(z).cols() == 2);
  const Matrix plain = forward_plain(g, forward_plain(f, x));
  CHECK(tape.value(z) == plain);
}

TEST_CASE("forward rejects width mismatch") {
  const MlpParams f = init_mlp(MlpSpec{{-1, 8, 4}}, 6, 3);
  Rng rng(9);
  const Matrix bad = uniform_matrix(5, 7, -1.0, 1.0, rng);
  CHECK_THROWS_AS(forward_plain(f, bad), DimensionError);
}

TEST_CASE("checkpoint roundtrip is bit exact") {
  const MlpParams f = init_mlp(MlpSpec{{-1, 11, 4}}, 9, 17);
  const MlpParams g = init_mlp(MlpSpec{{4, 6, 2}}, 4, 18);
  const std::string path = "test_checkpoint_roundtrip.json";
  save_checkpoint(path, f, g);
  MlpParams f2, g2;
  load_checkpoint(path, f2, g2);
  REQUIRE(f2.num_layers() == f.num_layers());
  REQUIRE(g2.num_layers() == g.num_layers());
  for (int l = 0; l < f.num_layers(); ++l) {
    CHECK(f2.weights[l] == f.weights[l]);
    CHECK(f2.biases[l] == f.biases[l]);
  }
  for (int l = 0; l < g.num_layers(); ++l) {
    CHECK(g2.weights[l] == g.weights[l]);
    CHECK(g2.biases[l] == g.biases[l]);
  }
  std::remove(path.c_str());
}

TEST_CASE("checkpoint roundtrip with identity g") {
  const MlpParams f = init_mlp(MlpSpec{{-1, 5, 2}}, 3, 1);
  const std::string path = "test_checkpoint_identity.json";
  save_checkpoint(path, f, MlpParams{});
  MlpParams f2, g2;
  load_checkpoint(path, f2, g2);
  CHECK(g2.empty());
  CHECK(f2.weights[0] == f.weights[0]);
  std::remove(path.c_str());
}
