#ifndef RBFGAN_KERNELS_HPP
#define RBFGAN_KERNELS_HPP

#include <string>
#include <vector>

namespace rbfgan {

// Hard floor on every radial width; enforced at init and after each
// optimizer step.
inline constexpr double kSigmaMin = 1e-3;

enum class KernelKind { gaussian, laplace, inverse_multiquadrics };

const char* kernel_name(KernelKind kind);
KernelKind kernel_from_name(const std::string& name);

// Kernel value from the squared distance r2 = |x - v|^2:
//   gaussian               exp(-r2 / (2 sigma^2))
//   laplace                exp(-sqrt(r2) / sigma)
//   inverse multiquadrics  1 / sqrt(r2 + sigma^2)
// r2 == 0 short-circuits to the exact peak value (1, 1, 1/sigma).
double kernel_value_r2(KernelKind kind, double r2, double sigma);

// d(kernel)/d(r2); combined with d(r2)/dx = 2(x-v) this yields every spatial
// gradient. For laplace at r2 == 0 the gradient is defined as zero.
double kernel_dvalue_dr2(KernelKind kind, double r2, double sigma);

// d(kernel)/d(sigma) from the squared distance.
double kernel_dvalue_dsigma(KernelKind kind, double r2, double sigma);

struct KernelGrad {
  std::vector<double> dx;  // d g / d x
  std::vector<double> dv;  // d g / d v, equals -dx for all three kernels
  double dsigma = 0.0;
};

// g(x, v, sigma) on full vectors. Throws DimensionError on length mismatch,
// ParameterError if sigma < kSigmaMin, NumericError on non-finite input.
double kernel_eval(KernelKind kind, const std::vector<double>& x,
                   const std::vector<double>& v, double sigma);

// Analytic gradients of g with respect to x, v and sigma.
KernelGrad kernel_grad(KernelKind kind, const std::vector<double>& x,
                       const std::vector<double>& v, double sigma);

}  // namespace rbfgan

#endif  // RBFGAN_KERNELS_HPP
