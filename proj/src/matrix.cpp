#include "rbfgan/matrix.hpp"

#include <cmath>

#include "rbfgan/errors.hpp"

namespace rbfgan {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix out(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c)
      throw DimensionError("from_rows: ragged row " + std::to_string(i) +
                           " (expected " + std::to_string(c) + " entries)");
    std::size_t j = 0;
    for (double v : row) out(i, j++) = v;
    ++i;
  }
  out.require_finite("from_rows input");
  return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix out(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c)
      throw DimensionError("from_rows: ragged row " + std::to_string(i) +
                           " (expected " + std::to_string(c) + " entries)");
    for (std::size_t j = 0; j < c; ++j) out(i, j) = rows[i][j];
  }
  out.require_finite("from_rows input");
  return out;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void Matrix::require_finite(const std::string& what) const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i]))
      throw NumericError("non-finite value in " + what + " at flat index " +
                         std::to_string(i));
  }
}

void Matrix::fill(double v) {
  for (auto& x : data_) x = v;
}

namespace {

void check_inner(const char* op, const Matrix& a, const Matrix& b,
                 std::size_t ak, std::size_t bk) {
  if (ak != bk)
    throw DimensionError(std::string(op) + ": incompatible shapes " +
                         a.shape_str() + " and " + b.shape_str());
}

void check_same(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() +
                         " vs " + b.shape_str());
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_inner("matmul", a, b, a.cols(), b.rows());
  a.require_finite("matmul lhs");
  b.require_finite("matmul rhs");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row_ptr(i);
    double* oi = out.row_ptr(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b.row_ptr(p);
      for (std::size_t j = 0; j < m; ++j) oi[j] += aip * bp[j];
    }
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  check_inner("matmul_nt", a, b, a.cols(), b.cols());
  a.require_finite("matmul_nt lhs");
  b.require_finite("matmul_nt rhs");
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row_ptr(i);
    double* oi = out.row_ptr(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = b.row_ptr(j);
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      oi[j] = acc;
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  check_inner("matmul_tn", a, b, a.rows(), b.rows());
  a.require_finite("matmul_tn lhs");
  b.require_finite("matmul_tn rhs");
  const std::size_t n = a.cols(), k = a.rows(), m = b.cols();
  Matrix out(n, m);
  for (std::size_t p = 0; p < k; ++p) {
    const double* ap = a.row_ptr(p);
    const double* bp = b.row_ptr(p);
    for (std::size_t i = 0; i < n; ++i) {
      const double api = ap[i];
      double* oi = out.row_ptr(i);
      for (std::size_t j = 0; j < m; ++j) oi[j] += api * bp[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  check_same("add", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  check_same("sub", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  check_same("hadamard", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * s;
  return out;
}

Matrix take_rows(const Matrix& a, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= a.rows())
      throw DimensionError("take_rows: index " + std::to_string(idx[i]) +
                           " out of range for " + a.shape_str());
    const double* src = a.row_ptr(idx[i]);
    double* dst = out.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
  }
  return out;
}

Matrix slice_cols(const Matrix& a, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi > a.cols())
    throw DimensionError("slice_cols: [" + std::to_string(lo) + "," +
                         std::to_string(hi) + ") out of range for " + a.shape_str());
  Matrix out(a.rows(), hi - lo);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = lo; j < hi; ++j) out(i, j - lo) = a(i, j);
  return out;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw DimensionError("hcat: row mismatch " + a.shape_str() + " vs " + b.shape_str());
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.row_ptr(i);
    const double* pa = a.row_ptr(i);
    const double* pb = b.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = pa[j];
    for (std::size_t j = 0; j < b.cols(); ++j) dst[a.cols() + j] = pb[j];
  }
  return out;
}

}  // namespace rbfgan
