#pragma once

#include <vector>

#include "dlme/graph.hpp"
#include "dlme/matrix.hpp"

namespace dlme {

// Hop-1 neighborhood of one vertex, ordered for the angle-deficit walk. The
// ring is sorted by the polar angle of each neighbor offset projected onto
// the top-2 principal directions of the neighbor cloud.
struct LocalPatch {
  int center = -1;
  std::vector<int> ring;          // neighbor ids, angular order
  std::vector<double> angles;     // matching polar angles, strictly increasing in (-pi, pi]
  Matrix basis;                   // 2 x D orthonormal tangent basis
};

// Angle at b formed by rays b->a and b->c, in [0, pi].
double angle(const double* a, const double* b, const double* c, int dim);
double angle(const Matrix& data, int a, int b, int c);

LocalPatch build_patch(const Matrix& data, const NeighborGraph& graph, int i);

// Angular extent covered by the ring: the full circle minus the excess of the
// largest consecutive gap over an evenly spread ring's gap. Small spans
// indicate boundary vertices whose neighbors sit in a half plane.
double ring_angular_span(const LocalPatch& patch);

// Angle deficit 2*pi - sum of consecutive ring angles (wraparound included).
double vertex_curvature(const Matrix& data, const LocalPatch& patch);

struct CurvatureReport {
  double mean_abs_k = 0.0;    // flatness score: mean of |k| over used vertices
  double signed_sum_k = 0.0;  // plain sum of deficits over used vertices
  int used = 0;
  int skipped_degenerate = 0;
  int skipped_boundary = 0;
};

// Aggregates vertex curvature over all vertices whose patch is non-degenerate
// and whose ring covers at least 90% of the full circle; the rest are skipped
// and counted.
CurvatureReport mean_curvature(const Matrix& data, const NeighborGraph& graph);

struct Hop12Report {
  std::vector<int> satisfied_ids;
  int checked = 0;
  int satisfied = 0;
  int skipped = 0;  // vertices with an empty hop-2 set
  double satisfied_fraction = 0.0;
};

// Order-preserving check per vertex: the largest hop-1 distance must be
// smaller than the smallest hop-2 distance. Hop-2 is neighbors-of-neighbors
// minus hop-1 and the vertex itself.
Hop12Report hop12_check(const Matrix& data, const NeighborGraph& graph);

}  // namespace dlme
