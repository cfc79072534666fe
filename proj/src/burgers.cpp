#include "rbfgan/burgers.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "rbfgan/errors.hpp"
#include "rbfgan/text.hpp"

namespace rbfgan {

namespace {

constexpr double kPi = std::numbers::pi;

void check_point(double x, double t, double v) {
  if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(v))
    throw ParameterError("burgers solution needs finite x, t, v");
  if (t < 0.0) throw ParameterError("burgers solution needs t >= 0, got t = " + fmt17(t));
  if (v < kViscosityMin)
    throw ParameterError("burgers solution needs v >= " + fmt17(kViscosityMin) + ", got v = " +
                         fmt17(v));
}

void check_axis(const char* name, const Axis& a) {
  if (!std::isfinite(a.start) || !std::isfinite(a.end) || !std::isfinite(a.step))
    throw ParameterError(std::string(name) + " axis needs finite start, end, step");
  if (!(a.step > 0.0))
    throw ParameterError(std::string(name) + " axis needs step > 0, got " + fmt17(a.step));
  if (a.end < a.start)
    throw ParameterError(std::string(name) + " axis needs end >= start, got [" + fmt17(a.start) +
                         ", " + fmt17(a.end) + "]");
}

}  // namespace

const char* family_name(BurgersFamily f) {
  switch (f) {
    case BurgersFamily::sine: return "sine";
    case BurgersFamily::rational: return "rational";
  }
  throw ParameterError("unknown solution family enum value");
}

BurgersFamily family_from_name(const std::string& name) {
  if (name == "sine") return BurgersFamily::sine;
  if (name == "rational") return BurgersFamily::rational;
  throw ParameterError("unknown solution family '" + name + "' (expected sine or rational)");
}

double burgers_solution(double x, double t, double v, BurgersFamily family) {
  check_point(x, t, v);
  switch (family) {
    case BurgersFamily::sine: {
      // E <= 1 for t >= 0, so the denominator stays >= 1.
      const double e = std::exp(-v * kPi * kPi * t);
      return 2.0 * v * kPi * e * std::sin(kPi * x) / (2.0 + e * std::cos(kPi * x));
    }
    case BurgersFamily::rational:
      return x / (1.0 + t);
  }
  throw ParameterError("unknown solution family enum value");
}

double burgers_residual_fd4(const std::function<double(double, double)>& u, double x, double t,
                            double v, double hx, double ht) {
  if (!u) throw ParameterError("residual check needs a field function");
  if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(v))
    throw ParameterError("residual check needs finite x, t, v");
  if (!(hx > 0.0) || !(ht > 0.0) || !std::isfinite(hx) || !std::isfinite(ht))
    throw ParameterError("residual check needs positive finite step sizes");
  if (t < 2.0 * ht)
    throw ParameterError("residual stencil needs t >= 2*ht, got t = " + fmt17(t) + ", ht = " +
                         fmt17(ht));
  const double uc = u(x, t);
  const double uxm2 = u(x - 2.0 * hx, t), uxm1 = u(x - hx, t);
  const double uxp1 = u(x + hx, t), uxp2 = u(x + 2.0 * hx, t);
  const double utm2 = u(x, t - 2.0 * ht), utm1 = u(x, t - ht);
  const double utp1 = u(x, t + ht), utp2 = u(x, t + 2.0 * ht);
  const double ux = (-uxp2 + 8.0 * uxp1 - 8.0 * uxm1 + uxm2) / (12.0 * hx);
  const double uxx = (-uxp2 + 16.0 * uxp1 - 30.0 * uc + 16.0 * uxm1 - uxm2) / (12.0 * hx * hx);
  const double ut = (-utp2 + 8.0 * utp1 - 8.0 * utm1 + utm2) / (12.0 * ht);
  return ut + uc * ux - v * uxx;
}

std::size_t axis_count(const Axis& a) {
  check_axis("sampling", a);
  const double raw = std::floor((a.end - a.start) / a.step + 1e-9);
  if (raw > 1e15) throw ParameterError("axis spans too many points: step " + fmt17(a.step) +
                                       " over [" + fmt17(a.start) + ", " + fmt17(a.end) + "]");
  return static_cast<std::size_t>(raw) + 1;
}

double axis_value(const Axis& a, std::size_t i) {
  return a.start + static_cast<double>(i) * a.step;
}

Dataset burgers_generate(const GridSpec& grid, BurgersFamily family, std::size_t row_cap) {
  check_axis("t", grid.t);
  check_axis("x", grid.x);
  check_axis("v", grid.v);
  const std::size_t nt = axis_count(grid.t);
  const std::size_t nx = axis_count(grid.x);
  const std::size_t nv = axis_count(grid.v);
  const double total = static_cast<double>(nt) * static_cast<double>(nx) * static_cast<double>(nv);
  if (total > static_cast<double>(row_cap))
    throw ResourceError("grid has " + std::to_string(nt) + "*" + std::to_string(nx) + "*" +
                        std::to_string(nv) + " = " + fmt17(total) + " rows, cap is " +
                        std::to_string(row_cap));
  const std::size_t rows = nt * nx * nv;
  Matrix table(rows, 4);
  std::size_t r = 0;
  for (std::size_t it = 0; it < nt; ++it) {
    const double t = axis_value(grid.t, it);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x = axis_value(grid.x, ix);
      for (std::size_t iv = 0; iv < nv; ++iv, ++r) {
        const double v = axis_value(grid.v, iv);
        table(r, 0) = t;
        table(r, 1) = x;
        table(r, 2) = v;
        table(r, 3) = burgers_solution(x, t, v, family);
      }
    }
  }
  return make_dataset(Schema::burgers, std::move(table));
}

Matrix burgers_oracle_solve(const std::function<double(double, double)>& field, double v,
                            const Axis& x_axis, const Axis& t_axis) {
  if (!field) throw ParameterError("reference solver needs a field function");
  if (!std::isfinite(v) || !(v > 0.0))
    throw ParameterError("reference solver needs viscosity v > 0, got " + fmt17(v));
  check_axis("x", x_axis);
  check_axis("t", t_axis);
  const std::size_t nx = axis_count(x_axis);
  const std::size_t nlev = axis_count(t_axis);
  if (nx < 3)
    throw ParameterError("reference solver needs at least 3 x points, got " + std::to_string(nx));
  const double dx = x_axis.step;
  const double dt = t_axis.step;

  Matrix out(nlev, nx);
  std::vector<double> u(nx);
  double u0max = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    u[i] = field(axis_value(x_axis, i), axis_value(t_axis, 0));
    if (!std::isfinite(u[i]))
      throw ParameterError("initial condition is not finite at x = " +
                           fmt17(axis_value(x_axis, i)));
    u0max = std::max(u0max, std::abs(u[i]));
    out(0, i) = u[i];
  }
  const double courant = dt * u0max / dx;
  if (courant > 2.0)
    throw ResolutionError("advective Courant number dt*max|u0|/dx = " + fmt17(courant) +
                          " exceeds 2; refine the time axis");

  const std::size_t ni = nx - 2;  // interior unknowns
  const double mu = dt * v / (2.0 * dx * dx);
  std::vector<double> rhs(nx), w(nx), wnew(nx);
  std::vector<double> cp(ni), dp(ni);  // Thomas scratch

  for (std::size_t k = 0; k + 1 < nlev; ++k) {
    const double t_next = axis_value(t_axis, k + 1);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const double adv = u[i] * (u[i + 1] - u[i - 1]) / (2.0 * dx);
      const double dif = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
      rhs[i] = u[i] + 0.5 * dt * (v * dif - adv);
    }
    w = u;
    w[0] = field(axis_value(x_axis, 0), t_next);
    w[nx - 1] = field(axis_value(x_axis, nx - 1), t_next);
    if (!std::isfinite(w[0]) || !std::isfinite(w[nx - 1]))
      throw ParameterError("boundary value is not finite at t = " + fmt17(t_next));
    wnew[0] = w[0];
    wnew[nx - 1] = w[nx - 1];

    bool converged = false;
    for (int sweep = 0; sweep < 25 && !converged; ++sweep) {
      // Linearized system: advective velocity frozen at the current iterate.
      double prev_c = 0.0, prev_d = 0.0;
      for (std::size_t j = 0; j < ni; ++j) {
        const std::size_t i = j + 1;
        const double a = dt * w[i] / (4.0 * dx);
        const double lower = -a - mu;
        const double diag = 1.0 + 2.0 * mu;
        const double upper = a - mu;
        double b = rhs[i];
        if (j == 0) b -= lower * w[0];
        if (j + 1 == ni) b -= upper * w[nx - 1];
        const double low = (j == 0) ? 0.0 : lower;
        const double den = diag - low * prev_c;
        prev_c = (j + 1 == ni) ? 0.0 : upper / den;
        prev_d = (b - low * prev_d) / den;
        cp[j] = prev_c;
        dp[j] = prev_d;
      }
      double delta = 0.0, wmax = 1.0;
      double back = 0.0;
      for (std::size_t j = ni; j-- > 0;) {
        back = dp[j] - cp[j] * back;
        wnew[j + 1] = back;
        if (!std::isfinite(back))
          throw ResolutionError("reference solve diverged near t = " + fmt17(t_next) +
                                "; refine the grid");
        delta = std::max(delta, std::abs(back - w[j + 1]));
        wmax = std::max(wmax, std::abs(back));
      }
      w = wnew;
      converged = delta <= 1e-12 * wmax;
    }
    if (!converged)
      throw ResolutionError("advection linearization did not settle at t = " + fmt17(t_next) +
                            "; refine the time axis");
    u = w;
    for (std::size_t i = 0; i < nx; ++i) out(k + 1, i) = u[i];
  }
  return out;
}

}  // namespace rbfgan
