#include "dlme/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "dlme/error.hpp"

namespace dlme {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundarySpanFraction = 0.9;

// Jacobi eigendecomposition of a small symmetric matrix; eigenvalues come out
// with matching eigenvectors in the columns of V.
void jacobi_eigen(Matrix a, std::vector<double>& eigvals, Matrix& eigvecs) {
  const int n = a.rows();
  eigvecs = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = eigvecs(k, p), vkq = eigvecs(k, q);
          eigvecs(k, p) = c * vkp - s * vkq;
          eigvecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = a(i, i);
}

}  // namespace

double angle(const double* a, const double* b, const double* c, int dim) {
  double na = 0.0, nc = 0.0, dot = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double u = a[k] - b[k];
    const double v = c[k] - b[k];
    na += u * u;
    nc += v * v;
    dot += u * v;
  }
  if (na <= 0.0 || nc <= 0.0) {
    throw DegenerateInputError("angle: coincident points");
  }
  const double cosv = std::clamp(dot / std::sqrt(na * nc), -1.0, 1.0);
  return std::acos(cosv);
}

double angle(const Matrix& data, int a, int b, int c) {
  return angle(data.row(a), data.row(b), data.row(c), data.cols());
}

LocalPatch build_patch(const Matrix& data, const NeighborGraph& graph, int i) {
  if (i < 0 || i >= graph.n) throw ContractError("build_patch: vertex out of range");
  const std::vector<int>& nb = graph.indices[i];
  if (static_cast<int>(nb.size()) < 3) {
    throw DegenerateInputError("build_patch: vertex " + std::to_string(i) +
                               " has fewer than 3 neighbors");
  }
  const int d = data.cols();
  const int k = static_cast<int>(nb.size());

  // Covariance of the neighbor cloud about its own mean.
  std::vector<double> mean(d, 0.0);
  for (int j : nb)
    for (int c = 0; c < d; ++c) mean[c] += data(j, c);
  for (double& m : mean) m /= k;
  Matrix cov(d, d, 0.0);
  for (int j : nb) {
    for (int a = 0; a < d; ++a) {
      const double da = data(j, a) - mean[a];
      for (int b = a; b < d; ++b) {
        cov(a, b) += da * (data(j, b) - mean[b]);
      }
    }
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < a; ++b) cov(a, b) = cov(b, a);

  std::vector<double> eigvals;
  Matrix eigvecs;
  jacobi_eigen(cov, eigvals, eigvecs);
  int top1 = 0, top2 = -1;
  for (int c = 1; c < d; ++c)
    if (eigvals[c] > eigvals[top1]) top1 = c;
  for (int c = 0; c < d; ++c) {
    if (c == top1) continue;
    if (top2 < 0 || eigvals[c] > eigvals[top2]) top2 = c;
  }
  if (top2 < 0 || !(eigvals[top1] > 0.0) || eigvals[top2] <= eigvals[top1] * 1e-12) {
    throw DegenerateInputError("build_patch: neighborhood of vertex " + std::to_string(i) +
                               " is rank deficient");
  }

  LocalPatch patch;
  patch.center = i;
  patch.basis = Matrix(2, d);
  for (int c = 0; c < d; ++c) {
    patch.basis(0, c) = eigvecs(c, top1);
    patch.basis(1, c) = eigvecs(c, top2);
  }

  std::vector<std::pair<double, int>> order;
  order.reserve(k);
  for (int j : nb) {
    double u = 0.0, v = 0.0;
    for (int c = 0; c < d; ++c) {
      const double off = data(j, c) - data(i, c);
      u += off * patch.basis(0, c);
      v += off * patch.basis(1, c);
    }
    order.emplace_back(std::atan2(v, u), j);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [ang, j] : order) {
    patch.angles.push_back(ang);
    patch.ring.push_back(j);
  }
  return patch;
}

double ring_angular_span(const LocalPatch& patch) {
  const std::size_t m = patch.angles.size();
  double max_gap = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 < m ? patch.angles[j + 1] : patch.angles[0] + 2.0 * kPi;
    max_gap = std::max(max_gap, next - patch.angles[j]);
  }
  // Only the excess of the widest gap over an evenly spread ring's gap counts
  // against coverage, so a sparse but well-distributed ring spans the full
  // circle while a half-plane ring does not.
  const double excess = max_gap - 2.0 * kPi / static_cast<double>(m);
  return std::min(2.0 * kPi, 2.0 * kPi - excess);
}

double vertex_curvature(const Matrix& data, const LocalPatch& patch) {
  const std::size_t m = patch.ring.size();
  if (m < 3) throw DegenerateInputError("vertex_curvature: ring too small");
  double angle_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const int a = patch.ring[j];
    const int c = patch.ring[(j + 1) % m];
    angle_sum += angle(data, a, patch.center, c);
  }
  return 2.0 * kPi - angle_sum;
}

CurvatureReport mean_curvature(const Matrix& data, const NeighborGraph& graph) {
  CurvatureReport report;
  double abs_sum = 0.0;
  for (int i = 0; i < graph.n; ++i) {
    LocalPatch patch;
    double k = 0.0;
    try {
      patch = build_patch(data, graph, i);
      k = vertex_curvature(data, patch);
    } catch (const DegenerateInputError&) {
      ++report.skipped_degenerate;
      continue;
    }
    if (ring_angular_span(patch) < kBoundarySpanFraction * 2.0 * kPi) {
      ++report.skipped_boundary;
      continue;
    }
    ++report.used;
    report.signed_sum_k += k;
    abs_sum += std::abs(k);
  }
  if (report.used > 0) report.mean_abs_k = abs_sum / report.used;
  return report;
}

Hop12Report hop12_check(const Matrix& data, const NeighborGraph& graph) {
  Hop12Report report;
  for (int i = 0; i < graph.n; ++i) {
    std::set<int> hop1(graph.indices[i].begin(), graph.indices[i].end());
    std::set<int> hop2;
    for (int j : graph.indices[i]) {
      for (int h : graph.indices[j]) {
        if (h != i && !hop1.count(h)) hop2.insert(h);
      }
    }
    if (hop2.empty()) {
      ++report.skipped;
      continue;
    }
    const double max_hop1 = graph.dists[i].back();
    double min_hop2 = std::numeric_limits<double>::infinity();
    for (int h : hop2) {
      double sq = 0.0;
      for (int c = 0; c < data.cols(); ++c) {
        const double diff = data(i, c) - data(h, c);
        sq += diff * diff;
      }
      min_hop2 = std::min(min_hop2, std::sqrt(sq));
    }
    ++report.checked;
    if (max_hop1 < min_hop2) {
      ++report.satisfied;
      report.satisfied_ids.push_back(i);
    }
  }
  if (report.checked > 0) {
    report.satisfied_fraction = static_cast<double>(report.satisfied) / report.checked;
  }
  return report;
}

}  // namespace dlme
