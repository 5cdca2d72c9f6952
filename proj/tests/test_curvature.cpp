#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dlme/curvature.hpp"
#include "dlme/error.hpp"
#include "dlme/graph.hpp"

using namespace dlme;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Center at row 0, ring points appended; returns the data matrix.
Matrix hexagon_patch(double z_of(int), double radius = 1.0) {
  Matrix pts(7, 3, 0.0);
  for (int i = 0; i < 6; ++i) {
    const double phi = 2.0 * kPi * i / 6.0;
    pts(i + 1, 0) = radius * std::cos(phi);
    pts(i + 1, 1) = radius * std::sin(phi);
    pts(i + 1, 2) = z_of(i);
  }
  return pts;
}

Matrix planar_grid(int side) {
  Matrix pts(side * side, 2);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      pts(i * side + j, 0) = i;
      pts(i * side + j, 1) = j;
    }
  }
  return pts;
}

Matrix fibonacci_sphere(int n) {
  Matrix pts(n, 3);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - y * y);
    const double phi = golden * i;
    pts(i, 0) = r * std::cos(phi);
    pts(i, 1) = y;
    pts(i, 2) = r * std::sin(phi);
  }
  return pts;
}

// Deterministic 3-D rotation from three Givens rotations.
Matrix rotate_translate(const Matrix& x, double a, double b, double c, double tx, double ty,
                        double tz) {
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  const double cc = std::cos(c), sc = std::sin(c);
  Matrix out(x.rows(), 3);
  for (int i = 0; i < x.rows(); ++i) {
    double p0 = x(i, 0), p1 = x(i, 1), p2 = x(i, 2);
    double q0 = ca * p0 - sa * p1, q1 = sa * p0 + ca * p1;  // about z
    double q2 = p2;
    double r0 = cb * q0 + sb * q2, r2 = -sb * q0 + cb * q2;  // about y
    double r1 = q1;
    out(i, 0) = r0 + tx;
    out(i, 1) = cc * r1 - sc * r2 + ty;  // about x
    out(i, 2) = sc * r1 + cc * r2 + tz;
  }
  return out;
}

}  // namespace

TEST_CASE("angle: right angle, straight line, equilateral triangle") {
  const Matrix pts{{1, 0, 0}, {0, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0.5, std::sqrt(3) / 2, 0}};
  CHECK(angle(pts, 0, 1, 2) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(angle(pts, 0, 1, 3) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(angle(pts, 0, 1, 4) == doctest::Approx(kPi / 3).epsilon(1e-12));
  CHECK_THROWS_AS(angle(pts, 0, 0, 2), DegenerateInputError);
}

TEST_CASE("planar hexagon: cyclic ring order and zero deficit") {
  const Matrix pts = hexagon_patch([](int) { return 0.0; });
  const NeighborGraph g = build_knn(pts, 6);
  const LocalPatch patch = build_patch(pts, g, 0);
  REQUIRE(patch.ring.size() == 6);

  // Ring angles strictly increasing within (-pi, pi].
  for (std::size_t i = 1; i < patch.angles.size(); ++i) {
    CHECK(patch.angles[i] > patch.angles[i - 1]);
  }
  // The ring visits the hexagon in its cyclic order (either orientation).
  std::vector<int> ring = patch.ring;
  const auto pos = std::find(ring.begin(), ring.end(), 1);
  REQUIRE(pos != ring.end());
  std::rotate(ring.begin(), pos, ring.end());
  const std::vector<int> fwd{1, 2, 3, 4, 5, 6};
  std::vector<int> bwd{1, 6, 5, 4, 3, 2};
  CHECK((ring == fwd || ring == bwd));

  CHECK(std::abs(vertex_curvature(pts, patch)) < 1e-10);
  CHECK(ring_angular_span(patch) > 0.9 * 2.0 * kPi);
}

TEST_CASE("ring cyclic order is independent of the input row order") {
  Matrix pts = hexagon_patch([](int) { return 0.0; });
  // Shuffle the ring rows: new row r holds old ring vertex perm[r].
  const std::vector<int> perm{3, 1, 5, 0, 4, 2};
  Matrix shuffled(7, 3, 0.0);
  for (int c = 0; c < 3; ++c) shuffled(0, c) = pts(0, c);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 3; ++c) shuffled(r + 1, c) = pts(perm[r] + 1, c);
  }
  const NeighborGraph g = build_knn(shuffled, 6);
  const LocalPatch patch = build_patch(shuffled, g, 0);

  // Map ring ids back to original hexagon vertices and check adjacency: each
  // consecutive pair must be hexagon neighbors.
  std::vector<int> orig;
  for (int id : patch.ring) orig.push_back(perm[id - 1]);
  for (std::size_t i = 0; i < orig.size(); ++i) {
    const int a = orig[i], b = orig[(i + 1) % orig.size()];
    const int diff = std::abs(a - b);
    CHECK((diff == 1 || diff == 5));
  }
}

TEST_CASE("near-planar noisy patch recovers the tangent plane") {
  Matrix pts(13, 3, 0.0);
  Rng rng(3);
  std::uniform_real_distribution<double> noise(-1e-5, 1e-5);
  for (int i = 0; i < 12; ++i) {
    const double phi = 2.0 * kPi * i / 12.0;
    pts(i + 1, 0) = std::cos(phi);
    pts(i + 1, 1) = std::sin(phi);
    pts(i + 1, 2) = noise(rng);
  }
  const NeighborGraph g = build_knn(pts, 12);
  const LocalPatch patch = build_patch(pts, g, 0);
  // Both basis vectors should be orthogonal to the z axis to ~1e-3 rad.
  for (int r = 0; r < 2; ++r) {
    CHECK(std::abs(patch.basis(r, 2)) < 1e-3);
  }
}

TEST_CASE("degenerate patches are rejected") {
  // All neighbors collinear.
  const Matrix pts{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {-1, 0, 0}};
  const NeighborGraph g = build_knn(pts, 4);
  CHECK_THROWS_AS(build_patch(pts, g, 0), DegenerateInputError);
}

TEST_CASE("cone apex deficit matches the analytic value") {
  const double beta = kPi / 4.0;
  Matrix pts(7, 3, 0.0);
  for (int i = 0; i < 6; ++i) {
    const double phi = 2.0 * kPi * i / 6.0;
    pts(i + 1, 0) = std::sin(beta) * std::cos(phi);
    pts(i + 1, 1) = std::sin(beta) * std::sin(phi);
    pts(i + 1, 2) = -std::cos(beta);
  }
  const NeighborGraph g = build_knn(pts, 6);
  const LocalPatch patch = build_patch(pts, g, 0);
  const double k = vertex_curvature(pts, patch);
  // 2*pi - 6*arccos(cos^2 b + sin^2 b cos(pi/3)), frozen from the analytic cone.
  CHECK(k == doctest::Approx(1.9467798202990928).epsilon(1e-12));
  CHECK(k > 0.0);
}

TEST_CASE("saddle-like patch has negative deficit") {
  const Matrix pts = hexagon_patch([](int i) { return (i % 2 == 0) ? 0.35 : -0.35; });
  const NeighborGraph g = build_knn(pts, 6);
  CHECK(vertex_curvature(pts, build_patch(pts, g, 0)) < 0.0);
}

TEST_CASE("planar grid aggregates to zero curvature") {
  const Matrix pts = planar_grid(12);
  const NeighborGraph g = build_knn(pts, 8);
  const CurvatureReport rep = mean_curvature(pts, g);
  CHECK(rep.used > 0);
  CHECK(rep.mean_abs_k < 1e-8);
  CHECK(std::abs(rep.signed_sum_k) < 1e-8);
  // Sheet corners and edges are excluded as boundary vertices.
  CHECK(rep.skipped_boundary > 0);
}

TEST_CASE("sphere sample has positive total deficit") {
  const Matrix pts = fibonacci_sphere(400);
  const NeighborGraph g = build_knn(pts, 8);
  const CurvatureReport rep = mean_curvature(pts, g);
  CHECK(rep.used > 300);
  CHECK(rep.signed_sum_k > 0.0);
  CHECK(rep.mean_abs_k > 0.0);
}

TEST_CASE("curvature is invariant under rigid motion and uniform scaling") {
  const Matrix pts = fibonacci_sphere(200);
  const NeighborGraph g = build_knn(pts, 8);

  const Matrix moved = rotate_translate(pts, 0.7, -1.1, 2.3, 4.0, -2.0, 9.0);
  const NeighborGraph gm = build_knn(moved, 8);
  REQUIRE(g.indices == gm.indices);

  Matrix scaled(pts.rows(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) scaled.data()[i] = 3.7 * pts.data()[i];
  const NeighborGraph gs = build_knn(scaled, 8);
  REQUIRE(g.indices == gs.indices);

  for (int i = 0; i < pts.rows(); ++i) {
    const double k0 = vertex_curvature(pts, build_patch(pts, g, i));
    const double k1 = vertex_curvature(moved, build_patch(moved, gm, i));
    const double k2 = vertex_curvature(scaled, build_patch(scaled, gs, i));
    CHECK(std::abs(k0 - k1) < 1e-10);
    CHECK(std::abs(k0 - k2) < 1e-10);
  }
}

TEST_CASE("hop-1/2 ordering on an evenly spaced line") {
  const int n = 12;
  Matrix pts(n, 1);
  for (int i = 0; i < n; ++i) pts(i, 0) = i;
  const NeighborGraph g = build_knn(pts, 1);
  const Hop12Report rep = hop12_check(pts, g);
  // Vertices 0 and 1 have empty hop-2 sets; all others satisfy 1 < 2.
  CHECK(rep.skipped == 2);
  CHECK(rep.checked == n - 2);
  CHECK(rep.satisfied == n - 2);
  CHECK(rep.satisfied_fraction == 1.0);
}

TEST_CASE("hop-2 sets agree with a breadth-first expansion") {
  Rng rng(9);
  const Matrix pts = uniform_matrix(60, 3, -1.0, 1.0, rng);
  const NeighborGraph g = build_knn(pts, 4);
  const Hop12Report rep = hop12_check(pts, g);
  CHECK(rep.satisfied_fraction >= 0.0);
  CHECK(rep.satisfied_fraction <= 1.0);
  CHECK(rep.checked + rep.skipped == 60);

  const std::set<int> satisfied(rep.satisfied_ids.begin(), rep.satisfied_ids.end());
  for (int i = 0; i < 60; ++i) {
    // Depth-limited BFS over the directed kNN edges.
    std::set<int> h1(g.indices[i].begin(), g.indices[i].end());
    std::set<int> h2;
    for (int j : h1) {
      for (int h : g.indices[j]) {
        if (h != i && !h1.count(h)) h2.insert(h);
      }
    }
    if (h2.empty()) {
      CHECK(!satisfied.count(i));
      continue;
    }
    double max1 = 0.0;
    for (int j : h1) {
      double sq = 0.0;
      for (int c = 0; c < 3; ++c) sq += (pts(i, c) - pts(j, c)) * (pts(i, c) - pts(j, c));
      max1 = std::max(max1, sq);
    }
    double min2 = 1e300;
    for (int j : h2) {
      double sq = 0.0;
      for (int c = 0; c < 3; ++c) sq += (pts(i, c) - pts(j, c)) * (pts(i, c) - pts(j, c));
      min2 = std::min(min2, sq);
    }
    CHECK(satisfied.count(i) == (std::sqrt(max1) < std::sqrt(min2) ? 1 : 0));
  }
}
