#include "rbfgan/losses.hpp"

#include <cmath>

#include "rbfgan/errors.hpp"

namespace rbfgan {

namespace {

void check_probs(const Matrix& d, const char* what, double eps) {
  if (d.cols() != 1 || d.rows() == 0)
    throw DimensionError(std::string(what) + ": expected a non-empty column, got " +
                         d.shape_str());
  if (!(eps > 0.0) || eps >= 0.5)
    throw ParameterError("loss clamp eps must lie in (0, 0.5)");
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double v = d(i, 0);
    if (!std::isfinite(v))
      throw NumericError(std::string(what) + ": non-finite entry " + std::to_string(i));
    if (v < 0.0 || v > 1.0)
      throw ParameterError(std::string(what) + ": entry " + std::to_string(i) +
                           " = " + std::to_string(v) + " outside [0,1]");
  }
}

inline double clamp01(double v, double eps) {
  if (v < eps) return eps;
  if (v > 1.0 - eps) return 1.0 - eps;
  return v;
}

inline bool clamped(double v, double eps) { return v <= eps || v >= 1.0 - eps; }

}  // namespace

double d_loss(const Matrix& d_real, const Matrix& d_fake, double eps) {
  check_probs(d_real, "d_loss real", eps);
  check_probs(d_fake, "d_loss fake", eps);
  double acc = 0.0;
  for (std::size_t i = 0; i < d_real.rows(); ++i)
    acc -= std::log(clamp01(d_real(i, 0), eps));
  double loss = acc / static_cast<double>(d_real.rows());
  acc = 0.0;
  for (std::size_t i = 0; i < d_fake.rows(); ++i)
    acc -= std::log(1.0 - clamp01(d_fake(i, 0), eps));
  return loss + acc / static_cast<double>(d_fake.rows());
}

double g_loss(const Matrix& d_fake, double eps) {
  check_probs(d_fake, "g_loss", eps);
  double acc = 0.0;
  for (std::size_t i = 0; i < d_fake.rows(); ++i)
    acc += std::log(1.0 - clamp01(d_fake(i, 0), eps));
  return acc / static_cast<double>(d_fake.rows());
}

// For d = logistic(raw): d/draw of -log(d)/n is -(1-d)/n, and of
// -log(1-d)/n is d/n; the generator term log(1-d)/n gives -d/n. The
// logistic factor d(1-d) has been folded in analytically.

Matrix d_loss_real_grad_raw(const Matrix& d_real, double eps) {
  check_probs(d_real, "d_loss real", eps);
  const double n = static_cast<double>(d_real.rows());
  Matrix g(d_real.rows(), 1);
  for (std::size_t i = 0; i < d_real.rows(); ++i) {
    const double v = d_real(i, 0);
    g(i, 0) = clamped(v, eps) ? 0.0 : -(1.0 - v) / n;
  }
  return g;
}

Matrix d_loss_fake_grad_raw(const Matrix& d_fake, double eps) {
  check_probs(d_fake, "d_loss fake", eps);
  const double n = static_cast<double>(d_fake.rows());
  Matrix g(d_fake.rows(), 1);
  for (std::size_t i = 0; i < d_fake.rows(); ++i) {
    const double v = d_fake(i, 0);
    g(i, 0) = clamped(v, eps) ? 0.0 : v / n;
  }
  return g;
}

Matrix g_loss_grad_raw(const Matrix& d_fake, double eps) {
  check_probs(d_fake, "g_loss", eps);
  const double n = static_cast<double>(d_fake.rows());
  Matrix g(d_fake.rows(), 1);
  for (std::size_t i = 0; i < d_fake.rows(); ++i) {
    const double v = d_fake(i, 0);
    g(i, 0) = clamped(v, eps) ? 0.0 : -v / n;
  }
  return g;
}

}  // namespace rbfgan
