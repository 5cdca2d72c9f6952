#include "dlme/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "dlme/error.hpp"

namespace dlme {

namespace {

constexpr double kSvmLambda = 1e-4;
constexpr int kSvmEpochs = 200;

struct Scaler {
  std::vector<double> mean, inv_std;

  static Scaler fit(const Matrix& x, const std::vector<int>& rows) {
    Scaler s;
    const int d = x.cols();
    s.mean.assign(d, 0.0);
    s.inv_std.assign(d, 0.0);
    for (int r : rows)
      for (int c = 0; c < d; ++c) s.mean[c] += x(r, c);
    for (double& m : s.mean) m /= static_cast<double>(rows.size());
    for (int r : rows) {
      for (int c = 0; c < d; ++c) {
        const double diff = x(r, c) - s.mean[c];
        s.inv_std[c] += diff * diff;
      }
    }
    for (int c = 0; c < d; ++c) {
      s.inv_std[c] = 1.0 / std::sqrt(std::max(s.inv_std[c] / rows.size(), 1e-12));
    }
    return s;
  }

  void apply(const Matrix& x, int row, std::vector<double>& out) const {
    for (std::size_t c = 0; c < mean.size(); ++c) {
      out[c] = (x(row, c) - mean[c]) * inv_std[c];
    }
  }
};

// Pegasos-style SGD for one binary hinge problem. y in {-1, +1}.
void train_binary_svm(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                      std::vector<double>& w, double& b, Rng& rng) {
  const int n = static_cast<int>(xs.size());
  const int d = static_cast<int>(xs.front().size());
  w.assign(d, 0.0);
  b = 0.0;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  long t = 0;
  for (int epoch = 0; epoch < kSvmEpochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int idx : order) {
      ++t;
      const double eta = 1.0 / (kSvmLambda * static_cast<double>(t + 100));
      const auto& x = xs[idx];
      const double y = ys[idx];
      double margin = b;
      for (int c = 0; c < d; ++c) margin += w[c] * x[c];
      margin *= y;
      const double shrink = 1.0 - eta * kSvmLambda;
      for (double& wc : w) wc *= shrink;
      if (margin < 1.0) {
        for (int c = 0; c < d; ++c) w[c] += eta * y * x[c];
        b += eta * y;
      }
    }
  }
}

struct OvrSvm {
  std::vector<int> classes;
  std::vector<std::vector<double>> weights;
  std::vector<double> biases;
  Scaler scaler;

  int predict(const Matrix& x, int row, std::vector<double>& scratch) const {
    scaler.apply(x, row, scratch);
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes.size(); ++k) {
      double score = biases[k];
      for (std::size_t c = 0; c < scratch.size(); ++c) score += weights[k][c] * scratch[c];
      if (score > best_score) {
        best_score = score;
        best = classes[k];
      }
    }
    return best;
  }
};

OvrSvm train_ovr_svm(const Matrix& x, const std::vector<int>& labels,
                     const std::vector<int>& rows, std::uint64_t seed) {
  OvrSvm model;
  model.scaler = Scaler::fit(x, rows);
  std::map<int, int> class_set;
  for (int r : rows) class_set[labels[r]] = 0;
  for (auto& [c, _] : class_set) model.classes.push_back(c);

  std::vector<std::vector<double>> xs(rows.size(), std::vector<double>(x.cols()));
  for (std::size_t i = 0; i < rows.size(); ++i) model.scaler.apply(x, rows[i], xs[i]);

  std::vector<int> ys(rows.size());
  for (std::size_t k = 0; k < model.classes.size(); ++k) {
    const int cls = model.classes[k];
    for (std::size_t i = 0; i < rows.size(); ++i) ys[i] = labels[rows[i]] == cls ? 1 : -1;
    Rng rng(seed * 1315423911ULL + k);
    std::vector<double> w;
    double b;
    train_binary_svm(xs, ys, w, b, rng);
    model.weights.push_back(std::move(w));
    model.biases.push_back(b);
  }
  return model;
}

}  // namespace

SvmResult linear_svm_cv(const Matrix& z, const std::vector<int>& labels, int folds,
                        std::uint64_t seed) {
  const int n = z.rows();
  if (static_cast<int>(labels.size()) != n) {
    throw ContractError("linear_svm_cv: labels do not match rows");
  }
  if (folds < 2 || folds > n) throw ContractError("linear_svm_cv: bad fold count");

  // Stratified folds: shuffle within each class, deal round-robin.
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  std::vector<int> fold_of(n, -1);
  for (auto& [cls, ids] : by_class) {
    if (static_cast<int>(ids.size()) < folds) {
      throw ContractError("linear_svm_cv: class " + std::to_string(cls) + " has only " +
                          std::to_string(ids.size()) + " samples for " + std::to_string(folds) +
                          " folds");
    }
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * (cls + 1)));
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < ids.size(); ++i) fold_of[ids[i]] = static_cast<int>(i % folds);
  }

  SvmResult result;
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train_rows, test_rows;
    for (int i = 0; i < n; ++i) (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    const OvrSvm model = train_ovr_svm(z, labels, train_rows, seed + f);
    std::vector<double> scratch(z.cols());
    int hits = 0;
    for (int r : test_rows) {
      if (model.predict(z, r, scratch) == labels[r]) ++hits;
    }
    result.fold_acc.push_back(static_cast<double>(hits) / test_rows.size());
  }
  result.mean_acc = std::accumulate(result.fold_acc.begin(), result.fold_acc.end(), 0.0) / folds;
  return result;
}

std::vector<int> linear_svm_predict(const Matrix& train, const std::vector<int>& train_labels,
                                    const Matrix& test, std::uint64_t seed) {
  std::vector<int> rows(train.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const OvrSvm model = train_ovr_svm(train, train_labels, rows, seed);
  std::vector<double> scratch(train.cols());
  std::vector<int> pred(test.rows());
  for (int r = 0; r < test.rows(); ++r) pred[r] = model.predict(test, r, scratch);
  return pred;
}

namespace {

double sq_dist(const Matrix& x, int row, const double* center) {
  double sq = 0.0;
  for (int c = 0; c < x.cols(); ++c) {
    const double diff = x(row, c) - center[c];
    sq += diff * diff;
  }
  return sq;
}

KMeansResult lloyd_once(const Matrix& x, int k, Rng& rng) {
  const int n = x.rows(), d = x.cols();
  Matrix centroids(k, d, 0.0);

  // k-means++ seeding.
  std::uniform_int_distribution<int> first(0, n - 1);
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  int chosen = first(rng);
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += min_sq[i];
      if (total <= 0.0) {
        chosen = first(rng);  // all points coincide with a centroid
      } else {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng), acc = 0.0;
        chosen = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += min_sq[i];
          if (acc >= target) {
            chosen = i;
            break;
          }
        }
      }
    }
    std::copy(x.row(chosen), x.row(chosen) + d, centroids.row(c));
    for (int i = 0; i < n; ++i) min_sq[i] = std::min(min_sq[i], sq_dist(x, i, centroids.row(c)));
  }

  KMeansResult res;
  res.assignments.assign(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_sq = sq_dist(x, i, centroids.row(0));
      for (int c = 1; c < k; ++c) {
        const double sq = sq_dist(x, i, centroids.row(c));
        if (sq < best_sq) {
          best_sq = sq;
          best = c;
        }
      }
      inertia += best_sq;
      if (best != res.assignments[i]) {
        res.assignments[i] = best;
        changed = true;
      }
    }
    res.inertia_history.push_back(inertia);
    if (!changed) break;
    centroids.fill(0.0);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      ++counts[res.assignments[i]];
      double* c = centroids.row(res.assignments[i]);
      for (int j = 0; j < d; ++j) c[j] += x(i, j);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        int far_i = 0;
        double far_sq = -1.0;
        for (int i = 0; i < n; ++i) {
          const int a = res.assignments[i];
          if (counts[a] <= 1) continue;
          const double sq = sq_dist(x, i, centroids.row(a));
          if (sq > far_sq) {
            far_sq = sq;
            far_i = i;
          }
        }
        std::copy(x.row(far_i), x.row(far_i) + d, centroids.row(c));
        counts[c] = 1;
        continue;
      }
      double* cc = centroids.row(c);
      for (int j = 0; j < d; ++j) cc[j] /= counts[c];
    }
  }
  res.inertia = 0.0;
  for (int i = 0; i < n; ++i) res.inertia += sq_dist(x, i, centroids.row(res.assignments[i]));
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace

KMeansResult kmeans(const Matrix& z, int k, std::uint64_t seed, int restarts) {
  if (k <= 0 || k > z.rows()) {
    throw ContractError("kmeans requires 0 < k <= n, got k=" + std::to_string(k) +
                        " n=" + std::to_string(z.rows()));
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    KMeansResult cand = lloyd_once(z, k, rng);
    if (cand.inertia < best.inertia) best = std::move(cand);
  }
  return best;
}

std::vector<int> hungarian_min_cost(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw ContractError("hungarian: cost matrix must be square");
  const int n = cost.rows();
  // Potentials method (Jonker-Volgenant style), 1-based internals.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

double cluster_accuracy(const std::vector<int>& assignments, const std::vector<int>& labels) {
  if (assignments.size() != labels.size()) {
    throw ContractError("cluster_accuracy: length mismatch");
  }
  if (assignments.empty()) return 0.0;
  // Compact both id spaces, build the confusion matrix, pad square.
  std::map<int, int> amap, lmap;
  for (int a : assignments) amap.emplace(a, 0);
  for (int l : labels) lmap.emplace(l, 0);
  int na = 0, nl = 0;
  for (auto& [k, v] : amap) v = na++;
  for (auto& [k, v] : lmap) v = nl++;
  const int m = std::max(na, nl);
  Matrix confusion(m, m, 0.0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    confusion(amap[assignments[i]], lmap[labels[i]]) += 1.0;
  }
  // Maximize matches == minimize (max - count).
  double cmax = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cmax = std::max(cmax, confusion(i, j));
  Matrix cost(m, m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cost(i, j) = cmax - confusion(i, j);
  const std::vector<int> row_to_col = hungarian_min_cost(cost);
  double correct = 0.0;
  for (int i = 0; i < m; ++i) {
    if (row_to_col[i] >= 0) correct += confusion(i, row_to_col[i]);
  }
  return correct / static_cast<double>(assignments.size());
}

}  // namespace dlme
