#ifndef RBFGAN_LOSSES_HPP
#define RBFGAN_LOSSES_HPP

#include "rbfgan/matrix.hpp"

namespace rbfgan {

// Default clamp applied inside the log terms.
inline constexpr double kDefaultClampEps = 1e-7;

// Adversarial discriminator loss
//   L_D = -mean(log c(d_real)) - mean(log(1 - c(d_fake)))
// where c clamps into [eps, 1-eps]. Inputs are n x 1 probability columns;
// entries outside [0,1] violate the contract and raise ParameterError.
// The clamp keeps the value finite for every parameter setting.
double d_loss(const Matrix& d_real, const Matrix& d_fake,
              double eps = kDefaultClampEps);

// Generator objective L_G = mean(log(1 - c(d_fake))), minimized.
double g_loss(const Matrix& d_fake, double eps = kDefaultClampEps);

// Gradients with respect to the raw (pre-logistic) scores, one column per
// batch. d = logistic(raw) must be passed in. Samples whose clamped value
// sits on the boundary get a zero gradient, consistent with the clamped loss.
Matrix d_loss_real_grad_raw(const Matrix& d_real, double eps);
Matrix d_loss_fake_grad_raw(const Matrix& d_fake, double eps);
Matrix g_loss_grad_raw(const Matrix& d_fake, double eps);

}  // namespace rbfgan

#endif  // RBFGAN_LOSSES_HPP
