#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "liemap/map.hpp"
#include "liemap/system.hpp"
#include "polybasis/polybasis.hpp"

namespace burgers {

// Periodic viscous Burgers problem on [0, 2*pi).
struct BurgersConfig {
  double nu = 0.07;
  int nx = 1000;
  double dx = 2.0 * 3.14159265358979323846 / 1000.0;
  double dt = 2.5e-4;
  double t_end = 0.5;
  int K = 3;  // truncation order of the one-step window map
  int r = 2;  // window half-width
  int q = 2;  // expansion order of the uneven-spacing diffusion weights

  // Keeps dx consistent with nx (dx * nx = 2*pi).
  void set_mesh(int nx_);
  long long steps() const;  // round(t_end / dt)
  // nx >= 8, dx*nx = 2*pi within 1e-12, dt > 0, t_end >= 0, r >= 1, K >= 2.
  void validate() const;
};

// Two-wave closed-form solution (log-sum-exp evaluated, stable in the far
// tails); used for initial data and error reporting.
double analytic_u(double t, double x, double nu);
Eigen::VectorXd analytic_profile(double t, const Eigen::VectorXd& x, double nu);

// x_i = 2*pi*i/nx, i = 0..nx-1.
Eigen::VectorXd mesh(int nx);

struct Field {
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  double t = 0.0;
};

// Nodes on the uniform mesh carrying the analytic t = 0 profile.
Field initial_field(const BurgersConfig& cfg);

// Fixed-mesh reference scheme: explicit Euler in time, first-order upwind
// convection, centered diffusion, periodic wrap. fdm_step is one update on an
// arbitrary periodic value vector; fdm_simulate advances u0 by cfg.steps()
// steps and throws DivergenceError (with the step index) if the state leaves
// the finite range.
Eigen::VectorXd fdm_step(const Eigen::VectorXd& u, double dx, double dt, double nu);
Field fdm_simulate(const BurgersConfig& cfg, const Eigen::VectorXd& u0);

// Window dynamics for a moving-node stencil. The window state (4r+1 variables)
// is the 2r spacing deviations s_j = x_{j+1}-x_j-dx, j = -r..r-1, followed by
// the 2r+1 node values u_{-r}..u_{r}. Spacing rows are exact and linear; value
// rows are nu * 2 [u_m*g_m - u_c*g_c + u_p*g_p] / dx^2 with the uneven-spacing
// weights g (rational in s/dx) expanded to total order q; terms above total
// degree min(1+q, K) are dropped. The two outermost values are held fixed over
// a step (the window edge has no neighbor to diffuse against).
liemap::PolynomialSystem stencil_system(const BurgersConfig& cfg);

struct StencilMap {
  int r = 0;
  int order = 0;
  double dt = 0.0;
  double dx = 0.0;
  double nu = 0.0;
  polybasis::StackedBasis basis;  // window monomials, degrees 0..order
  Eigen::VectorXd value_weights;  // new center value
  Eigen::VectorXd shift_weights;  // center position increment
};

// One-step window map, reusable at every node and step. The position increment
// comes from an auxiliary quadrature variable z' = u_center integrated along
// with the window; z starts at 0, so its monomial columns drop out exactly.
StencilMap build_stencil_map(const BurgersConfig& cfg,
                             const liemap::BuildOptions& build = {});

// One synchronous step of every node (all reads from the previous field).
// Positions accumulate unwrapped; periodicity only enters through the window
// closure at the seam. Throws DivergenceError on non-finite output.
Field step_field(const StencilMap& map, const Field& f, bool parallel = false);

struct BenchRow {
  std::string method;  // "fdm", "map", "map-parallel"
  double time_step = 0.0;
  int nx = 0;
  long long steps = 0;
  double elapsed_seconds = 0.0;  // stepping loop only (no setup, no map build)
  double mse_final = 0.0;        // NaN when the run diverged
  long long diverged_at = -1;    // step index that produced a non-finite state
};

// Runs the fixed-mesh scheme and the moving-node map to the same t_end on the
// same mesh and viscosity, reporting per-method propagation time and final
// mean squared error against the analytic profile (for moving nodes, evaluated
// at their final positions mod 2*pi). A "map-parallel" row is appended when
// OpenMP is compiled in.
std::vector<BenchRow> benchmark(const BurgersConfig& cfg_fdm,
                                const BurgersConfig& cfg_map,
                                const liemap::BuildOptions& build = {});

}  // namespace burgers
