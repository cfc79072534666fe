#include "rbfgan/kernels.hpp"

#include <cmath>

#include "rbfgan/errors.hpp"

namespace rbfgan {

const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::laplace: return "laplace";
    case KernelKind::inverse_multiquadrics: return "imq";
  }
  return "?";
}

KernelKind kernel_from_name(const std::string& name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "laplace") return KernelKind::laplace;
  if (name == "imq" || name == "inverse-multiquadrics")
    return KernelKind::inverse_multiquadrics;
  throw ParameterError("unknown kernel '" + name + "'");
}

double kernel_value_r2(KernelKind kind, double r2, double sigma) {
  if (r2 == 0.0) {
    // Exact peak values; also keeps the imq maximum at exactly 1/sigma.
    return kind == KernelKind::inverse_multiquadrics ? 1.0 / sigma : 1.0;
  }
  switch (kind) {
    case KernelKind::gaussian:
      return std::exp(-r2 / (2.0 * sigma * sigma));
    case KernelKind::laplace:
      return std::exp(-std::sqrt(r2) / sigma);
    case KernelKind::inverse_multiquadrics:
      return 1.0 / std::sqrt(r2 + sigma * sigma);
  }
  return 0.0;
}

double kernel_dvalue_dr2(KernelKind kind, double r2, double sigma) {
  switch (kind) {
    case KernelKind::gaussian:
      return -kernel_value_r2(kind, r2, sigma) / (2.0 * sigma * sigma);
    case KernelKind::laplace: {
      // d/dr2 exp(-sqrt(r2)/sigma) = -g / (2 sigma sqrt(r2)); the kernel has
      // a cone peak at r = 0 where the gradient is defined as zero.
      if (r2 == 0.0) return 0.0;
      const double r = std::sqrt(r2);
      return -std::exp(-r / sigma) / (2.0 * sigma * r);
    }
    case KernelKind::inverse_multiquadrics: {
      const double g = 1.0 / std::sqrt(r2 + sigma * sigma);
      return -0.5 * g * g * g;
    }
  }
  return 0.0;
}

double kernel_dvalue_dsigma(KernelKind kind, double r2, double sigma) {
  switch (kind) {
    case KernelKind::gaussian:
      return kernel_value_r2(kind, r2, sigma) * r2 / (sigma * sigma * sigma);
    case KernelKind::laplace: {
      if (r2 == 0.0) return 0.0;
      const double r = std::sqrt(r2);
      return std::exp(-r / sigma) * r / (sigma * sigma);
    }
    case KernelKind::inverse_multiquadrics: {
      if (r2 == 0.0) return -1.0 / (sigma * sigma);
      const double g = 1.0 / std::sqrt(r2 + sigma * sigma);
      return -sigma * g * g * g;
    }
  }
  return 0.0;
}

namespace {

double checked_r2(const std::vector<double>& x, const std::vector<double>& v,
                  double sigma) {
  if (x.size() != v.size())
    throw DimensionError("kernel: point has " + std::to_string(x.size()) +
                         " entries, center has " + std::to_string(v.size()));
  if (!std::isfinite(sigma))
    throw NumericError("kernel: non-finite width");
  if (sigma < kSigmaMin)
    throw ParameterError("kernel: width " + std::to_string(sigma) +
                         " below the floor " + std::to_string(kSigmaMin));
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i]))
      throw NumericError("kernel: non-finite input at entry " + std::to_string(i));
    const double d = x[i] - v[i];
    r2 += d * d;
  }
  return r2;
}

}  // namespace

double kernel_eval(KernelKind kind, const std::vector<double>& x,
                   const std::vector<double>& v, double sigma) {
  return kernel_value_r2(kind, checked_r2(x, v, sigma), sigma);
}

KernelGrad kernel_grad(KernelKind kind, const std::vector<double>& x,
                       const std::vector<double>& v, double sigma) {
  const double r2 = checked_r2(x, v, sigma);
  const double ddr2 = kernel_dvalue_dr2(kind, r2, sigma);
  KernelGrad out;
  out.dx.resize(x.size());
  out.dv.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = 2.0 * ddr2 * (x[i] - v[i]);
    out.dx[i] = d;
    out.dv[i] = -d;
  }
  out.dsigma = kernel_dvalue_dsigma(kind, r2, sigma);
  return out;
}

}  // namespace rbfgan
