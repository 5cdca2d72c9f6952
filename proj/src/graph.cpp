#include "dlme/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dlme/error.hpp"

namespace dlme {

NeighborGraph build_knn(const Matrix& data, int k) {
  const int n = data.rows();
  if (k <= 0 || k >= n) {
    throw ContractError("build_knn requires 0 < k < n, got k=" + std::to_string(k) +
                        " n=" + std::to_string(n));
  }
  NeighborGraph g;
  g.n = n;
  g.k = k;
  g.indices.assign(n, {});
  g.dists.assign(n, {});
#pragma omp parallel for schedule(static) if (n > 256)
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n - 1);
    const double* xi = data.row(i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* xj = data.row(j);
      double sq = 0.0;
      for (int c = 0; c < data.cols(); ++c) {
        const double diff = xi[c] - xj[c];
        sq += diff * diff;
      }
      cand.emplace_back(sq, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    // partial_sort on (dist, index) pairs already breaks ties toward the
    // lower index.
    g.indices[i].resize(k);
    g.dists[i].resize(k);
    for (int j = 0; j < k; ++j) {
      g.indices[i][j] = cand[j].second;
      g.dists[i][j] = std::sqrt(cand[j].first);
    }
  }
  return g;
}

std::vector<double> augment_lc(const Matrix& data, const NeighborGraph& graph, int i, Rng& rng,
                               double r_lo, double r_hi) {
  if (i < 0 || i >= graph.n) throw ContractError("augment_lc: row index out of range");
  if (!(0.0 <= r_lo && r_lo <= r_hi && r_hi <= 1.0)) {
    throw ContractError("augment_lc: r range must satisfy 0 <= r_lo <= r_hi <= 1");
  }
  std::uniform_int_distribution<int> pick(0, graph.k - 1);
  const int nb = graph.indices[i][pick(rng)];
  std::uniform_real_distribution<double> rdist(r_lo, r_hi);
  const double r = r_lo == r_hi ? r_lo : rdist(rng);
  std::vector<double> out(data.cols());
  const double* x = data.row(i);
  const double* xn = data.row(nb);
  for (int c = 0; c < data.cols(); ++c) out[c] = r * x[c] + (1.0 - r) * xn[c];
  return out;
}

PairBatch make_pair_batch(const Matrix& data, const NeighborGraph& graph,
                          const std::vector<int>& anchors, Rng& rng, double r_lo, double r_hi) {
  const int b = static_cast<int>(anchors.size());
  if (b == 0) throw ContractError("make_pair_batch: empty anchor list");
  PairBatch batch;
  batch.origin_ids = anchors;
  batch.views = Matrix(2 * b, data.cols());
  for (int a = 0; a < b; ++a) {
    for (int v = 0; v < 2; ++v) {
      const std::vector<double> view = augment_lc(data, graph, anchors[a], rng, r_lo, r_hi);
      double* dst = batch.views.row(2 * a + v);
      std::copy(view.begin(), view.end(), dst);
    }
  }
  batch.homology = Matrix(2 * b, 2 * b, 0.0);
  for (int a = 0; a < b; ++a) {
    batch.homology(2 * a, 2 * a + 1) = 1.0;
    batch.homology(2 * a + 1, 2 * a) = 1.0;
  }
  return batch;
}

PairBatch sample_pair_batch(const Matrix& data, const NeighborGraph& graph, int batch, Rng& rng,
                            double r_lo, double r_hi) {
  const int n = data.rows();
  if (batch <= 0 || batch > n) {
    throw ContractError("sample_pair_batch requires 0 < B <= n, got B=" + std::to_string(batch) +
                        " n=" + std::to_string(n));
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(batch);
  return make_pair_batch(data, graph, ids, rng, r_lo, r_hi);
}

}  // namespace dlme
