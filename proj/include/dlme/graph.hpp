#pragma once

#include <vector>

#include "dlme/matrix.hpp"

namespace dlme {

// Exact k-nearest-neighbor table under Euclidean distance. Rows are sorted by
// distance, ties broken toward the lower index; a point is never its own
// neighbor.
struct NeighborGraph {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> indices;     // n rows of k neighbor ids
  std::vector<std::vector<double>> dists;    // matching distances, nondecreasing
};

NeighborGraph build_knn(const Matrix& data, int k);

// Linear-combination augmentation: picks a neighbor x^n of row i uniformly,
// draws r uniformly in [r_lo, r_hi] and returns r*x + (1-r)*x^n.
std::vector<double> augment_lc(const Matrix& data, const NeighborGraph& graph, int i, Rng& rng,
                               double r_lo, double r_hi);

// A minibatch of paired views. Rows 2a and 2a+1 of `views` are two independent
// augmentations of anchor a; homology marks exactly those sibling pairs.
struct PairBatch {
  std::vector<int> origin_ids;  // B anchor row ids
  Matrix views;                 // 2B x D
  Matrix homology;              // 2B x 2B, symmetric, zero diagonal, row sum 1
};

// Builds the batch for an explicit anchor list (the trainer shuffles epochs
// itself and feeds consecutive chunks here).
PairBatch make_pair_batch(const Matrix& data, const NeighborGraph& graph,
                          const std::vector<int>& anchors, Rng& rng, double r_lo, double r_hi);

// Samples B distinct anchors without replacement, then defers to
// make_pair_batch.
PairBatch sample_pair_batch(const Matrix& data, const NeighborGraph& graph, int batch, Rng& rng,
                            double r_lo, double r_hi);

}  // namespace dlme
