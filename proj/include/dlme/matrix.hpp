#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <vector>

namespace dlme {

using Rng = std::mt19937_64;

// Dense row-major matrix of doubles. The single data carrier of the library:
// datasets, activations, distance tables and gradients all live here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(check_dims(rows, cols)) {}
  Matrix(int rows, int cols, double fill)
      : rows_(rows), cols_(cols), data_(check_dims(rows, cols), fill) {}
  // Row-of-rows literal, for tests and small fixtures.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool all_finite() const;

  void fill(double v);

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  static std::size_t check_dims(int rows, int cols);

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a^T * b  (a is m x k, b is m x n, result k x n)
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
// c = a * b^T  (a is m x k, b is n x k, result m x n)
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

void add_inplace(Matrix& dst, const Matrix& src);
void axpy_inplace(Matrix& dst, double scale, const Matrix& src);  // dst += scale * src

double sum(const Matrix& a);
Matrix transpose(const Matrix& a);

Matrix uniform_matrix(int rows, int cols, double lo, double hi, Rng& rng);
Matrix gaussian_matrix(int rows, int cols, double mean, double stddev, Rng& rng);

}  // namespace dlme
