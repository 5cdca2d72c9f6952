#pragma once

#include <cstdint>
#include <vector>

#include "dlme/matrix.hpp"

namespace dlme {

struct EvalReport {
  double linear_acc = 0.0;
  std::vector<double> fold_acc;
  int fold_count = 0;
  double cluster_acc = 0.0;
  std::uint64_t seed = 0;
};

// One-vs-rest linear SVM (hinge + L2, lambda = 1e-4, 200 subgradient epochs)
// under stratified k-fold cross-validation. Features are standardized with
// train-fold statistics, which also makes predictions invariant to positive
// rescaling of Z. Requires at least `folds` samples per class.
struct SvmResult {
  double mean_acc = 0.0;
  std::vector<double> fold_acc;
};
SvmResult linear_svm_cv(const Matrix& z, const std::vector<int>& labels, int folds,
                        std::uint64_t seed);

// Predicted labels on `test` after training on (train, train_labels); exposed
// for scale-invariance and separability tests.
std::vector<int> linear_svm_predict(const Matrix& train, const std::vector<int>& train_labels,
                                    const Matrix& test, std::uint64_t seed);

// Lloyd's algorithm with k-means++ seeding, best inertia over `restarts`
// restarts, deterministic per seed.
struct KMeansResult {
  std::vector<int> assignments;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // per Lloyd iteration of the winning restart
};
KMeansResult kmeans(const Matrix& z, int k, std::uint64_t seed, int restarts = 10);

// Maximum-weight cluster-to-label matching on the confusion matrix (Hungarian
// algorithm); returns the matched count divided by n.
double cluster_accuracy(const std::vector<int>& assignments, const std::vector<int>& labels);

// Minimum-cost assignment of rows to columns of a square cost matrix; returns
// the column picked for each row. Exposed for oracle tests.
std::vector<int> hungarian_min_cost(const Matrix& cost);

}  // namespace dlme
