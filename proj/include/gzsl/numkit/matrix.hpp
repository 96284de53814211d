#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gzsl::numkit {

/// Dense row-major matrix of 32-bit floats.
///
/// Products and reductions accumulate in double and round once on store, so
/// results do not depend on how many rows share a call: row r of `matmul(A, B)`
/// is bitwise equal to `matmul(A.row(r), B)`.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, float fill = 0.0f);
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  /// Builds from nested rows; every row must have the same length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<float>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<float> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }
  const std::vector<float>& data() const { return data_; }

  /// Copy of one row as a 1 x cols matrix.
  Matrix row_matrix(std::size_t r) const;

  bool all_finite() const;
  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

void require_same_shape(const Matrix& a, const Matrix& b, const char* what);

/// a (n x k) * b (k x m)
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T (k x n)^T * b (n x m) -> (k x m); used for weight gradients.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
/// a (n x k) * b^T (m x k)^T -> (n x m); used for input gradients.
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, float factor);
void add_in_place(Matrix& target, const Matrix& delta);

/// Stacks matrices with equal column counts top to bottom.
Matrix vstack(std::span<const Matrix> parts);
/// Rows [begin, begin + count).
Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t count);
/// Columns [begin, begin + count).
Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t count);
/// Places `left` and `right` side by side.
Matrix hstack(const Matrix& left, const Matrix& right);
/// Gathers the listed rows in order.
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices);

/// Sum over every entry of |a - b|, accumulated in double.
double l1_distance(const Matrix& a, const Matrix& b);

}  // namespace gzsl::numkit
