#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "dlme/error.hpp"
#include "dlme/graph.hpp"

using namespace dlme;

namespace {

// Independent O(n^2) full-sort oracle.
NeighborGraph knn_oracle(const Matrix& data, int k) {
  NeighborGraph g;
  g.n = data.rows();
  g.k = k;
  g.indices.assign(g.n, {});
  g.dists.assign(g.n, {});
  for (int i = 0; i < g.n; ++i) {
    std::vector<std::pair<double, int>> all;
    for (int j = 0; j < g.n; ++j) {
      if (j == i) continue;
      double sq = 0.0;
      for (int c = 0; c < data.cols(); ++c) {
        const double diff = data(i, c) - data(j, c);
        sq += diff * diff;
      }
      all.emplace_back(sq, j);
    }
    std::sort(all.begin(), all.end());
    for (int j = 0; j < k; ++j) {
      g.indices[i].push_back(all[j].second);
      g.dists[i].push_back(std::sqrt(all[j].first));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("build_knn hand geometry: collinear points") {
  const Matrix pts{{0.0}, {1.0}, {10.0}};
  const NeighborGraph g = build_knn(pts, 1);
  CHECK(g.indices[0][0] == 1);
  CHECK(g.indices[1][0] == 0);
  CHECK(g.indices[2][0] == 1);
}

TEST_CASE("build_knn equals the full-sort oracle") {
  Rng rng(101);
  const Matrix data = uniform_matrix(50, 5, -1.0, 1.0, rng);
  for (int k : {1, 3, 7}) {
    const NeighborGraph got = build_knn(data, k);
    const NeighborGraph want = knn_oracle(data, k);
    CHECK(got.indices == want.indices);
    for (int i = 0; i < got.n; ++i) {
      for (int j = 0; j < k; ++j) {
        CHECK(got.dists[i][j] == doctest::Approx(want.dists[i][j]).epsilon(1e-12));
      }
      CHECK(std::is_sorted(got.dists[i].begin(), got.dists[i].end()));
      CHECK(std::find(got.indices[i].begin(), got.indices[i].end(), i) ==
            got.indices[i].end());
    }
  }
}

TEST_CASE("build_knn tie-break toward the lower index") {
  // Rows 1 and 2 are duplicates of row 0's nearest candidates.
  const Matrix pts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {5.0, 5.0}};
  const NeighborGraph g = build_knn(pts, 2);
  CHECK(g.indices[0][0] == 1);
  CHECK(g.indices[0][1] == 2);
  CHECK(g.indices[3][0] == 1);
  CHECK(g.indices[3][1] == 2);
}

TEST_CASE("build_knn rejects k >= n") {
  const Matrix pts{{0.0}, {1.0}};
  CHECK_THROWS_AS(build_knn(pts, 2), ContractError);
  CHECK_THROWS_AS(build_knn(pts, 0), ContractError);
}

TEST_CASE("augment_lc endpoints and convexity") {
  Rng rng(7);
  const Matrix data = uniform_matrix(20, 4, -2.0, 2.0, rng);
  const NeighborGraph g = build_knn(data, 4);

  // r fixed at 1 returns the anchor itself.
  Rng r1(1);
  const auto same = augment_lc(data, g, 3, r1, 1.0, 1.0);
  for (int c = 0; c < 4; ++c) CHECK(same[c] == data(3, c));

  // r fixed at 0 returns one of the neighbors.
  Rng r0(2);
  const auto nb = augment_lc(data, g, 3, r0, 0.0, 0.0);
  bool found = false;
  for (int j : g.indices[3]) {
    bool equal = true;
    for (int c = 0; c < 4; ++c) equal = equal && nb[c] == data(j, c);
    found = found || equal;
  }
  CHECK(found);

  // Generic draws stay inside the bounding box of anchor and neighbors.
  Rng rg(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int i = trial % 20;
    const auto v = augment_lc(data, g, i, rg, 0.25, 0.9);
    for (int c = 0; c < 4; ++c) {
      double lo = data(i, c), hi = data(i, c);
      for (int j : g.indices[i]) {
        lo = std::min(lo, data(j, c));
        hi = std::max(hi, data(j, c));
      }
      CHECK(v[c] >= lo - 1e-12);
      CHECK(v[c] <= hi + 1e-12);
    }
  }
}

TEST_CASE("pair batch homology invariant") {
  Rng rng(11);
  const Matrix data = uniform_matrix(30, 3, -1.0, 1.0, rng);
  const NeighborGraph g = build_knn(data, 5);

  Rng batch_rng(4);
  const PairBatch one = sample_pair_batch(data, g, 1, batch_rng, 0.5, 1.0);
  CHECK(one.homology == Matrix{{0, 1}, {1, 0}});

  const PairBatch three = sample_pair_batch(data, g, 3, batch_rng, 0.5, 1.0);
  CHECK(three.views.rows() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(three.homology(i, i) == 0.0);
    double row_sum = 0.0;
    for (int j = 0; j < 6; ++j) {
      row_sum += three.homology(i, j);
      CHECK(three.homology(i, j) == three.homology(j, i));
      const bool siblings = (i / 2 == j / 2) && i != j;
      CHECK(three.homology(i, j) == (siblings ? 1.0 : 0.0));
    }
    CHECK(row_sum == 1.0);
  }

  // Anchors are distinct.
  std::vector<int> ids = three.origin_ids;
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("pair batch sampling is deterministic per seed") {
  Rng rng(13);
  const Matrix data = uniform_matrix(25, 3, -1.0, 1.0, rng);
  const NeighborGraph g = build_knn(data, 5);
  Rng a(99), b(99);
  const PairBatch ba = sample_pair_batch(data, g, 8, a, 0.5, 1.0);
  const PairBatch bb = sample_pair_batch(data, g, 8, b, 0.5, 1.0);
  CHECK(ba.views == bb.views);
  CHECK(ba.origin_ids == bb.origin_ids);
}

TEST_CASE("sample_pair_batch rejects B > n") {
  Rng rng(17);
  const Matrix data = uniform_matrix(10, 2, -1.0, 1.0, rng);
  const NeighborGraph g = build_knn(data, 3);
  Rng batch_rng(1);
  CHECK_THROWS_AS(sample_pair_batch(data, g, 11, batch_rng, 0.5, 1.0), ContractError);
}
