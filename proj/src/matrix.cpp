#include "dlme/matrix.hpp"

#include <cmath>
#include <cstring>

#include "dlme/error.hpp"

namespace dlme {

std::size_t Matrix::check_dims(int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  data_.reserve(check_dims(rows_, cols_));
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) {
      throw DimensionError("ragged initializer list");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

namespace {

// Parallelizing over output rows keeps every element owned by one thread, so
// results are bit-identical for any thread count.
constexpr std::size_t kParallelFlopThreshold = 1u << 16;

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  const int m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n, 0.0);
  const bool par = static_cast<std::size_t>(m) * n * k > kParallelFlopThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int kk = 0; kk < k; ++kk) {
      const double aik = ai[kk];
      const double* bk = b.row(kk);
      for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_at_b shape mismatch");
  }
  const int m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(k, n, 0.0);
  const bool par = static_cast<std::size_t>(m) * n * k > kParallelFlopThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (int kk = 0; kk < k; ++kk) {
    double* ck = c.row(kk);
    for (int i = 0; i < m; ++i) {
      const double aik = a(i, kk);
      const double* bi = b.row(i);
      for (int j = 0; j < n; ++j) ck[j] += aik * bi[j];
    }
  }
  return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_a_bt shape mismatch");
  }
  const int m = a.rows(), k = a.cols(), n = b.rows();
  Matrix c(m, n, 0.0);
  const bool par = static_cast<std::size_t>(m) * n * k > kParallelFlopThreshold;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < m; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int j = 0; j < n; ++j) {
      const double* bj = b.row(j);
      double acc = 0.0;
      for (int kk = 0; kk < k; ++kk) acc += ai[kk] * bj[kk];
      ci[j] = acc;
    }
  }
  return c;
}

void add_inplace(Matrix& dst, const Matrix& src) {
  if (!dst.same_shape(src)) throw DimensionError("add_inplace shape mismatch");
  double* d = dst.data();
  const double* s = src.data();
  const std::size_t n = dst.size();
  for (std::size_t i = 0; i < n; ++i) d[i] += s[i];
}

void axpy_inplace(Matrix& dst, double scale, const Matrix& src) {
  if (!dst.same_shape(src)) throw DimensionError("axpy_inplace shape mismatch");
  double* d = dst.data();
  const double* s = src.data();
  const std::size_t n = dst.size();
  for (std::size_t i = 0; i < n; ++i) d[i] += scale * s[i];
}

double sum(const Matrix& a) {
  // Serial on purpose: a fixed summation order keeps reductions deterministic.
  double acc = 0.0;
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) acc += p[i];
  return acc;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix uniform_matrix(int rows, int cols, double lo, double hi, Rng& rng) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> dist(lo, hi);
  double* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = dist(rng);
  return m;
}

Matrix gaussian_matrix(int rows, int cols, double mean, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  std::normal_distribution<double> dist(mean, stddev);
  double* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = dist(rng);
  return m;
}

}  // namespace dlme
