#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "burgers/burgers.hpp"
#include "doctest.h"
#include "liemap/errors.hpp"

namespace {
const double kPi = 3.14159265358979323846;

// Exact window dynamics (no polynomial expansion): spacing deviations feed the
// uneven-spacing three-point diffusion; the outermost values are frozen; the
// optional trailing entry integrates the center value for the position shift.
Eigen::VectorXd exact_window_rhs(const Eigen::VectorXd& state, int r, double dx,
                                 double nu) {
  const bool with_z = state.size() == 4 * r + 2;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(state.size());
  for (int j = -r; j < r; ++j)
    out[j + r] = state[3 * r + j + 1] - state[3 * r + j];
  for (int j = -r + 1; j <= r - 1; ++j) {
    const double hm = dx + state[j - 1 + r];
    const double hp = dx + state[j + r];
    out[3 * r + j] = 2.0 * nu *
                     (state[3 * r + j - 1] / (hm * (hm + hp)) -
                      state[3 * r + j] / (hm * hp) +
                      state[3 * r + j + 1] / (hp * (hm + hp)));
  }
  if (with_z) out[4 * r + 1] = state[3 * r];
  return out;
}

Eigen::VectorXd rk4_window(Eigen::VectorXd state, int r, double dx, double nu,
                           double T, int steps) {
  const double h = T / steps;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = exact_window_rhs(state, r, dx, nu);
    const Eigen::VectorXd k2 = exact_window_rhs(state + 0.5 * h * k1, r, dx, nu);
    const Eigen::VectorXd k3 = exact_window_rhs(state + 0.5 * h * k2, r, dx, nu);
    const Eigen::VectorXd k4 = exact_window_rhs(state + h * k3, r, dx, nu);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return state;
}
}  // namespace

TEST_CASE("closed-form solution values") {
  CHECK(std::abs(burgers::analytic_u(0.0, 0.0, 0.07) - 4.0) <= 1e-12);
  CHECK(std::abs(burgers::analytic_u(0.0, 1.0, 0.07) - 5.0) <= 1e-12);
  CHECK(std::abs(burgers::analytic_u(0.5, 5.2, 0.07) - 2.5659806283382226) <= 1e-12);
  CHECK(std::abs(burgers::analytic_u(0.25, 3.14159, 0.07) - 5.7132719999999986) <=
        1e-12);
  CHECK(std::abs(burgers::analytic_u(1.0, 0.5, 0.03) - 2.25) <= 1e-12);
  CHECK(std::abs(burgers::analytic_u(0.0, kPi, 0.07) - 4.0) <= 1e-12);

  // far tails must not overflow the exponentials
  CHECK(std::isfinite(burgers::analytic_u(0.0, 100.0, 0.01)));
  CHECK(std::isfinite(burgers::analytic_u(2.0, -50.0, 0.01)));

  const Eigen::VectorXd xs = burgers::mesh(16);
  const Eigen::VectorXd prof = burgers::analytic_profile(0.25, xs, 0.07);
  for (int i = 0; i < 16; ++i)
    CHECK(prof[i] == burgers::analytic_u(0.25, xs[i], 0.07));
}

TEST_CASE("closed form satisfies the equation to second order in the probe") {
  const double nu = 0.07;
  for (const auto& [t, x] : std::vector<std::pair<double, double>>{{0.1, 2.0},
                                                                   {0.3, 4.0}}) {
    const auto residual = [&](double d) {
      const double ut =
          (burgers::analytic_u(t + d, x, nu) - burgers::analytic_u(t - d, x, nu)) /
          (2.0 * d);
      const double ux =
          (burgers::analytic_u(t, x + d, nu) - burgers::analytic_u(t, x - d, nu)) /
          (2.0 * d);
      const double uxx = (burgers::analytic_u(t, x + d, nu) -
                          2.0 * burgers::analytic_u(t, x, nu) +
                          burgers::analytic_u(t, x - d, nu)) /
                         (d * d);
      return ut + burgers::analytic_u(t, x, nu) * ux - nu * uxx;
    };
    const double r1 = residual(2e-3);
    const double r2 = residual(1e-3);
    CHECK(std::abs(r1) > 1e-9);
    CHECK(std::abs(r1 / r2) >= 3.0);
    CHECK(std::abs(r1 / r2) <= 5.0);
  }
}

TEST_CASE("configuration validation") {
  burgers::BurgersConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.steps() == 2000);

  cfg.set_mesh(100);
  CHECK(cfg.nx == 100);
  CHECK(cfg.dx == doctest::Approx(2.0 * kPi / 100.0));
  CHECK_NOTHROW(cfg.validate());

  burgers::BurgersConfig bad = cfg;
  bad.nx = 4;
  bad.dx = 2.0 * kPi / 4.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.dx = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.nu = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.t_end = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.t_end = 0.0;
  CHECK_NOTHROW(bad.validate());

  bad = cfg;
  bad.r = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.K = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("fixed-mesh scheme holds constant states exactly") {
  Eigen::VectorXd u = Eigen::VectorXd::Constant(16, 3.0);
  const double dx = 2.0 * kPi / 16.0;
  for (int k = 0; k < 100; ++k) u = burgers::fdm_step(u, dx, 1e-3, 0.07);
  CHECK((u.array() - 3.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("fixed-mesh three-node update") {
  Eigen::VectorXd u0(3);
  u0 << 1.0, 2.0, 3.0;
  const double dx = 2.0 * kPi / 3.0;
  const double dt = 0.1;
  const double nu = 0.5;
  const Eigen::VectorXd u1 = burgers::fdm_step(u0, dx, dt, nu);

  // hand-rolled update with periodic wrap
  const double conv = dt / dx;
  const double diff = nu * dt / (dx * dx);
  Eigen::VectorXd want(3);
  for (int i = 0; i < 3; ++i) {
    const double um = u0[(i + 2) % 3];
    const double up = u0[(i + 1) % 3];
    want[i] = u0[i] - conv * u0[i] * (u0[i] - um) + diff * (up - 2.0 * u0[i] + um);
  }
  CHECK((u1 - want).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::VectorXd pinned(3);
  pinned << 1.1296888653344262, 1.9045070341448628, 2.8225646517380052;
  CHECK((u1 - pinned).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fixed-mesh blow-up is reported with the step index") {
  burgers::BurgersConfig cfg;
  cfg.set_mesh(16);
  cfg.dt = 10.0;
  cfg.t_end = 200.0;
  const burgers::Field f0 = burgers::initial_field(cfg);
  try {
    (void)burgers::fdm_simulate(cfg, f0.u);
    FAIL("expected DivergenceError");
  } catch (const liemap::DivergenceError& e) {
    CHECK(e.last_valid < 20);
    CHECK(std::string(e.what()).find("diverged at step") != std::string::npos);
  }
}

TEST_CASE("window system vanishes at the rest state") {
  burgers::BurgersConfig cfg;
  const liemap::PolynomialSystem sys = burgers::stencil_system(cfg);
  REQUIRE(sys.n == 4 * cfg.r + 1);
  CHECK(sys.coeffs[0].isZero(0.0));
  const Eigen::VectorXd F = sys.eval(Eigen::VectorXd::Zero(sys.n));
  CHECK(F.norm() == 0.0);
}

TEST_CASE("window system is exact on the uniform mesh") {
  burgers::BurgersConfig cfg;
  const int r = cfg.r;
  const liemap::PolynomialSystem sys = burgers::stencil_system(cfg);

  // parabolic profile: second difference of x^2 over spacing dx is exactly 2
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4 * r + 1);
  for (int j = -r; j <= r; ++j) {
    const double xj = j * cfg.dx;
    w[3 * r + j] = xj * xj;
  }
  const Eigen::VectorXd F = sys.eval(w);

  for (int j = -r + 1; j <= r - 1; ++j)
    CHECK(F[3 * r + j] == doctest::Approx(2.0 * cfg.nu).epsilon(1e-12));
  // frozen window edges
  CHECK(F[2 * r] == 0.0);
  CHECK(F[4 * r] == 0.0);
  // spacing rows are the raw value differences
  for (int j = -r; j < r; ++j)
    CHECK(F[j + r] == doctest::Approx(w[3 * r + j + 1] - w[3 * r + j]).epsilon(1e-14));
}

TEST_CASE("expansion error of the diffusion weights drops at the expected rate") {
  burgers::BurgersConfig cfg;  // q = 2
  const int r = cfg.r;
  const liemap::PolynomialSystem sys = burgers::stencil_system(cfg);

  std::mt19937 gen(4242);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd s_dir(2 * r);
  for (int i = 0; i < 2 * r; ++i) s_dir[i] = dist(gen);
  Eigen::VectorXd u(2 * r + 1);
  u << 4.2, 5.1, 3.9, 4.8, 4.4;

  const auto center_error = [&](double eta) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(4 * r + 1);
    w.head(2 * r) = eta * cfg.dx * s_dir;
    w.tail(2 * r + 1) = u;
    const Eigen::VectorXd F = sys.eval(w);
    const Eigen::VectorXd exact = exact_window_rhs(w, r, cfg.dx, cfg.nu);
    return std::abs(F[3 * r] - exact[3 * r]);
  };

  const double e1 = center_error(0.1);
  const double e2 = center_error(0.05);
  CHECK(e1 > 1e-10);
  CHECK(e1 / e2 >= 6.0);
  CHECK(e1 / e2 <= 10.0);
}

TEST_CASE("vanishing viscosity reduces the window to pure transport") {
  burgers::BurgersConfig cfg;
  cfg.nu = 1e-30;
  const int r = cfg.r;
  const liemap::PolynomialSystem sys = burgers::stencil_system(cfg);

  // value rows inherit the nu prefactor and drop below roundoff
  for (int d = 0; d <= sys.max_deg(); ++d)
    for (int row = 2 * r; row <= 4 * r; ++row)
      CHECK(sys.coeffs[d].row(row).cwiseAbs().maxCoeff() <= 1e-20);

  // spacing rows stay the exact +-1 pattern on the value variables
  for (int j = -r; j < r; ++j) {
    Eigen::VectorXd row = sys.coeffs[1].row(j + r);
    CHECK(row[3 * r + j + 1] == 1.0);
    CHECK(row[3 * r + j] == -1.0);
    row[3 * r + j + 1] = 0.0;
    row[3 * r + j] = 0.0;
    CHECK(row.norm() == 0.0);
  }
}

TEST_CASE("one-step window map against the fine-step reference") {
  burgers::BurgersConfig cfg;
  cfg.dt = 1.25e-3;
  const int r = cfg.r;
  const burgers::StencilMap map = burgers::build_stencil_map(cfg);
  REQUIRE(map.order == cfg.K);
  REQUIRE(map.basis.size() == map.value_weights.size());
  // a zero window must stay put and generate no shift
  CHECK(map.value_weights[0] == 0.0);
  CHECK(map.shift_weights[0] == 0.0);

  const Eigen::VectorXd xs = burgers::mesh(cfg.nx);
  const Eigen::VectorXd u0 = burgers::analytic_profile(0.0, xs, cfg.nu);

  double max_rel_u = 0.0, max_rel_z = 0.0;
  for (int i = 0; i < cfg.nx; i += 7) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(4 * r + 1);
    for (int j = -r; j <= r; ++j)
      w[3 * r + j] = u0[((i + j) % cfg.nx + cfg.nx) % cfg.nx];

    const Eigen::VectorXd mono = polybasis::stacked_monomials(w, map.order);
    const double u_map = map.value_weights.dot(mono);
    const double z_map = map.shift_weights.dot(mono);

    Eigen::VectorXd aug(4 * r + 2);
    aug.head(4 * r + 1) = w;
    aug[4 * r + 1] = 0.0;
    const Eigen::VectorXd ref = rk4_window(aug, r, cfg.dx, cfg.nu, cfg.dt, 200);

    max_rel_u = std::max(max_rel_u, std::abs(u_map - ref[3 * r]) /
                                        std::max(std::abs(ref[3 * r]), 1e-30));
    max_rel_z = std::max(max_rel_z, std::abs(z_map - ref[4 * r + 1]) /
                                        std::max(std::abs(ref[4 * r + 1]), 1e-30));
  }
  CHECK(max_rel_u <= 5e-6);
  CHECK(max_rel_z <= 5e-6);
}

TEST_CASE("higher expansion orders push the one-step error below 1e-6") {
  burgers::BurgersConfig cfg;
  cfg.dt = 1.25e-3;
  cfg.r = 1;
  cfg.q = 3;
  cfg.K = 4;
  const int r = cfg.r;
  const burgers::StencilMap map = burgers::build_stencil_map(cfg);

  const Eigen::VectorXd xs = burgers::mesh(cfg.nx);
  const Eigen::VectorXd u0 = burgers::analytic_profile(0.0, xs, cfg.nu);

  double max_rel_u = 0.0, max_rel_z = 0.0;
  for (int i = 0; i < cfg.nx; i += 7) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(4 * r + 1);
    for (int j = -r; j <= r; ++j)
      w[3 * r + j] = u0[((i + j) % cfg.nx + cfg.nx) % cfg.nx];

    const Eigen::VectorXd mono = polybasis::stacked_monomials(w, map.order);
    const double u_map = map.value_weights.dot(mono);
    const double z_map = map.shift_weights.dot(mono);

    Eigen::VectorXd aug(4 * r + 2);
    aug.head(4 * r + 1) = w;
    aug[4 * r + 1] = 0.0;
    const Eigen::VectorXd ref = rk4_window(aug, r, cfg.dx, cfg.nu, cfg.dt, 200);

    max_rel_u = std::max(max_rel_u, std::abs(u_map - ref[3 * r]) /
                                        std::max(std::abs(ref[3 * r]), 1e-30));
    max_rel_z = std::max(max_rel_z, std::abs(z_map - ref[4 * r + 1]) /
                                        std::max(std::abs(ref[4 * r + 1]), 1e-30));
  }
  CHECK(max_rel_u <= 1e-6);
  CHECK(max_rel_z <= 1e-6);
}

TEST_CASE("constant fields advect without deformation") {
  burgers::BurgersConfig cfg;
  cfg.set_mesh(64);
  cfg.dt = 0.002;
  const burgers::StencilMap map = burgers::build_stencil_map(cfg);

  burgers::Field f;
  f.x = burgers::mesh(64);
  f.u = Eigen::VectorXd::Constant(64, 1.0);
  f.t = 0.0;

  const Eigen::VectorXd x0 = f.x;
  for (int k = 0; k < 100; ++k) f = burgers::step_field(map, f);

  CHECK((f.u.array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK((f.x - (x0.array() + 100.0 * 1.0 * 0.002).matrix()).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK(f.t == doctest::Approx(100.0 * 0.002).epsilon(1e-12));
}

TEST_CASE("window stepping reports divergence") {
  burgers::BurgersConfig cfg;
  cfg.set_mesh(16);
  cfg.dt = 0.002;
  const burgers::StencilMap map = burgers::build_stencil_map(cfg);

  burgers::Field f;
  f.x = burgers::mesh(16);
  f.u = Eigen::VectorXd::Constant(16, 1e200);
  for (int i = 0; i < 16; i += 2) f.u[i] = -1e200;  // cubic monomials overflow
  f.t = 0.0;
  CHECK_THROWS_AS((void)burgers::step_field(map, f), liemap::DivergenceError);
}

TEST_CASE("benchmark with t_end zero reports the initial error") {
  burgers::BurgersConfig cfg;
  cfg.set_mesh(32);
  cfg.dt = 0.002;
  cfg.t_end = 0.0;
  const auto rows = burgers::benchmark(cfg, cfg);
  REQUIRE(rows.size() >= 2);
  for (const auto& row : rows) {
    CHECK(row.steps == 0);
    CHECK(row.diverged_at == -1);
    CHECK(row.mse_final <= 1e-28);
    CHECK(row.nx == 32);
  }
  CHECK(rows[0].method == "fdm");
  CHECK(rows[1].method == "map");
}

TEST_CASE("short stable benchmark stays accurate for both methods") {
  burgers::BurgersConfig cfg;
  cfg.set_mesh(32);
  cfg.dt = 0.002;
  cfg.t_end = 0.02;
  const auto rows = burgers::benchmark(cfg, cfg);
  REQUIRE(rows.size() >= 2);
  for (const auto& row : rows) {
    CHECK(row.steps == 10);
    CHECK(row.diverged_at == -1);
    CHECK(std::isfinite(row.mse_final));
    // 32 nodes under-resolve the profile's kink, so the error is
    // resolution-limited (~0.11); the bound only rules out blow-up.
    CHECK(row.mse_final < 0.5);
    CHECK(row.elapsed_seconds >= 0.0);
  }
}

TEST_CASE("benchmark requires a shared problem") {
  burgers::BurgersConfig a;
  a.set_mesh(32);
  a.dt = 0.002;
  a.t_end = 0.02;

  burgers::BurgersConfig b = a;
  b.nu = 0.08;
  CHECK_THROWS_AS((void)burgers::benchmark(a, b), std::invalid_argument);

  b = a;
  b.set_mesh(64);
  CHECK_THROWS_AS((void)burgers::benchmark(a, b), std::invalid_argument);

  b = a;
  b.t_end = 0.05;
  CHECK_THROWS_AS((void)burgers::benchmark(a, b), std::invalid_argument);
}

TEST_CASE("mesh and initial field") {
  const Eigen::VectorXd xs = burgers::mesh(8);
  REQUIRE(xs.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(xs[i] == doctest::Approx(2.0 * kPi * i / 8.0).epsilon(1e-15));

  burgers::BurgersConfig cfg;
  cfg.set_mesh(8);
  const burgers::Field f = burgers::initial_field(cfg);
  CHECK(f.t == 0.0);
  REQUIRE(f.u.size() == 8);
  for (int i = 0; i < 8; ++i)
    CHECK(f.u[i] == burgers::analytic_u(0.0, f.x[i], cfg.nu));
}
