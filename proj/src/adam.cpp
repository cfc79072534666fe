#include "rbfgan/adam.hpp"

#include <cmath>

#include "rbfgan/errors.hpp"

namespace rbfgan {

void adam_step(AdamState& state, Matrix& param, const Matrix& grad) {
  if (!param.same_shape(grad) || !param.same_shape(state.m))
    throw DimensionError("adam_step: param " + param.shape_str() + ", grad " +
                         grad.shape_str() + ", state " + state.m.shape_str());
  param.require_finite("adam_step param");
  grad.require_finite("adam_step grad");

  state.t += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.t));

  double* m = state.m.data();
  double* v = state.v.data();
  double* p = param.data();
  const double* g = grad.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double mhat = m[i] / corr1;
    const double vhat = v[i] / corr2;
    p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace rbfgan
