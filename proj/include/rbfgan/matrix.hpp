#ifndef RBFGAN_MATRIX_HPP
#define RBFGAN_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace rbfgan {

// Dense row-major matrix of 64-bit floats. The only tensor type in the
// project; vectors are n x 1 (or 1 x n) matrices.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Rejects ragged rows and non-finite entries.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape_str() const;

  // Throws NumericError naming `what` if any entry is NaN/Inf.
  void require_finite(const std::string& what) const;

  void fill(double v);

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// a (n x k) times b (k x m). Shape mismatch -> DimensionError; non-finite
// inputs -> NumericError. Accumulation order is fixed (k ascending per
// output element), so results are bitwise reproducible.
Matrix matmul(const Matrix& a, const Matrix& b);

// a times b^T without materializing the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

// a^T times b without materializing the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

// Copies the listed rows of `a` in the given order.
Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& idx);

// Columns [lo, hi) of `a`.
Matrix slice_cols(const Matrix& a, std::size_t lo, std::size_t hi);

// [a | b] side by side; row counts must agree.
Matrix hcat(const Matrix& a, const Matrix& b);

}  // namespace rbfgan

#endif  // RBFGAN_MATRIX_HPP
