#ifndef RBFGAN_ADAM_HPP
#define RBFGAN_ADAM_HPP

#include "rbfgan/matrix.hpp"

namespace rbfgan {

// Adam state for one parameter matrix. Moments live with the state; the
// parameter itself is owned by the caller.
struct AdamState {
  AdamState(std::size_t rows, std::size_t cols, double lr_)
      : m(rows, cols), v(rows, cols), lr(lr_) {}

  Matrix m;  // first moment
  Matrix v;  // second moment
  long long t = 0;
  double lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update, in place. Zero gradient leaves the
// parameter unchanged while the moments keep decaying toward zero.
void adam_step(AdamState& state, Matrix& param, const Matrix& grad);

}  // namespace rbfgan

#endif  // RBFGAN_ADAM_HPP
