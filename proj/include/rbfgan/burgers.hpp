#ifndef RBFGAN_BURGERS_HPP
#define RBFGAN_BURGERS_HPP

#include <cstddef>
#include <functional>
#include <string>

#include "rbfgan/dataset.hpp"
#include "rbfgan/matrix.hpp"

namespace rbfgan {

// Lowest admissible viscosity for the closed-form solution family.
inline constexpr double kViscosityMin = 0.05;

// Closed-form solutions of u_t + u u_x = v u_xx:
//   sine:     u = 2 v pi E sin(pi x) / (2 + E cos(pi x)),  E = exp(-v pi^2 t)
//   rational: u = x / (1 + t), viscosity-independent (u_xx == 0)
enum class BurgersFamily { sine, rational };

const char* family_name(BurgersFamily f);
BurgersFamily family_from_name(const std::string& name);

// Exact solution at one point. Requires t >= 0 and v >= kViscosityMin.
double burgers_solution(double x, double t, double v,
                        BurgersFamily family = BurgersFamily::sine);

// u_t + u u_x - v u_xx evaluated with fourth-order central stencils on an
// arbitrary field u(x, t). Requires t >= 2*ht so the time stencil stays in
// the t >= 0 half-plane where the built-in families are defined.
double burgers_residual_fd4(const std::function<double(double, double)>& u, double x,
                            double t, double v, double hx, double ht);

// Uniform sampling axis: values start + i*step for i in [0, count).
struct Axis {
  double start = 0.0;
  double end = 0.0;
  double step = 1.0;
};

// floor((end - start)/step + 1e-9) + 1. The slack keeps decimal steps that
// do not divide the span exactly in binary (e.g. 0.2 over [0.2, 4.8]) from
// dropping the final point.
std::size_t axis_count(const Axis& a);
double axis_value(const Axis& a, std::size_t i);

struct GridSpec {
  Axis t, x, v;
};

inline constexpr std::size_t kDefaultRowCap = 5'000'000;

// One row (t, x, v, u = burgers_solution) per grid point; t varies slowest,
// v fastest. Grids above row_cap are refused.
Dataset burgers_generate(const GridSpec& grid, BurgersFamily family = BurgersFamily::sine,
                         std::size_t row_cap = kDefaultRowCap);

// Independent Crank-Nicolson reference solver for u_t + u u_x = v u_xx.
// The field function supplies the initial condition at the first time level
// and Dirichlet boundary values at both ends of the x axis for every later
// level. The nonlinear advection term is handled by Picard iteration with a
// tridiagonal (Thomas) solve per sweep. Returns the full space-time field,
// row k = time level k, column i = x point i. Second-order accurate in both
// steps; sensible resolutions are dx <= 0.01 and dt <= 0.005. Configurations
// with an advective Courant number dt*max|u0|/dx above 2 or a stalled Picard
// iteration are refused as unresolvable.
Matrix burgers_oracle_solve(const std::function<double(double, double)>& field, double v,
                            const Axis& x_axis, const Axis& t_axis);

}  // namespace rbfgan

#endif  // RBFGAN_BURGERS_HPP
