#include "burgers/burgers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "liemap/errors.hpp"

namespace burgers {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

void BurgersConfig::set_mesh(int nx_) {
  nx = nx_;
  dx = kTwoPi / nx_;
}

long long BurgersConfig::steps() const { return std::llround(t_end / dt); }

void BurgersConfig::validate() const {
  if (nu <= 0.0) throw std::invalid_argument("BurgersConfig: nu must be positive");
  if (nx < 8) throw std::invalid_argument("BurgersConfig: nx must be >= 8");
  if (std::abs(dx * nx - kTwoPi) > 1e-12)
    throw std::invalid_argument("BurgersConfig: dx * nx must equal 2*pi");
  if (dt <= 0.0) throw std::invalid_argument("BurgersConfig: dt must be positive");
  if (t_end < 0.0) throw std::invalid_argument("BurgersConfig: t_end must be >= 0");
  if (r < 1) throw std::invalid_argument("BurgersConfig: r must be >= 1");
  if (K < 2) throw std::invalid_argument("BurgersConfig: K must be >= 2");
}

double analytic_u(double t, double x, double nu) {
  if (nu <= 0.0) throw std::invalid_argument("analytic_u: nu must be positive");
  if (t < 0.0) throw std::invalid_argument("analytic_u: t must be >= 0");
  const double a = x - 4.0 * t;
  const double b = a - kTwoPi;
  const double scale = 4.0 * nu * (t + 1.0);
  const double s1 = -a * a / scale;
  const double s2 = -b * b / scale;
  // factor out the larger exponent so the far tails stay finite
  const double smax = std::max(s1, s2);
  const double r1 = std::exp(s1 - smax);
  const double r2 = std::exp(s2 - smax);
  return 4.0 + (a * r1 + b * r2) / ((t + 1.0) * (r1 + r2));
}

Eigen::VectorXd analytic_profile(double t, const Eigen::VectorXd& x, double nu) {
  Eigen::VectorXd u(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) u[i] = analytic_u(t, x[i], nu);
  return u;
}

Eigen::VectorXd mesh(int nx) {
  if (nx < 1) throw std::invalid_argument("mesh: nx must be >= 1");
  Eigen::VectorXd x(nx);
  const double dx = kTwoPi / nx;
  for (int i = 0; i < nx; ++i) x[i] = i * dx;
  return x;
}

Field initial_field(const BurgersConfig& cfg) {
  cfg.validate();
  Field f;
  f.x = mesh(cfg.nx);
  f.u = analytic_profile(0.0, f.x, cfg.nu);
  f.t = 0.0;
  return f;
}

Eigen::VectorXd fdm_step(const Eigen::VectorXd& u, double dx, double dt, double nu) {
  const Eigen::Index nx = u.size();
  if (nx < 3) throw std::invalid_argument("fdm_step: need at least 3 nodes");
  if (dx <= 0.0) throw std::invalid_argument("fdm_step: dx must be positive");
  Eigen::VectorXd out(nx);
  const double diff = nu * dt / (dx * dx);
  const double conv = dt / dx;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const Eigen::Index im = (i + nx - 1) % nx;
    const Eigen::Index ip = (i + 1) % nx;
    out[i] = u[i] - conv * u[i] * (u[i] - u[im]) + diff * (u[ip] - 2.0 * u[i] + u[im]);
  }
  return out;
}

Field fdm_simulate(const BurgersConfig& cfg, const Eigen::VectorXd& u0) {
  cfg.validate();
  if (u0.size() != cfg.nx)
    throw std::invalid_argument("fdm_simulate: u0 length does not match nx");
  if (!u0.allFinite()) throw std::invalid_argument("fdm_simulate: u0 must be finite");
  Field f;
  f.x = mesh(cfg.nx);
  f.u = u0;
  const long long steps = cfg.steps();
  for (long long k = 1; k <= steps; ++k) {
    f.u = fdm_step(f.u, cfg.dx, cfg.dt, cfg.nu);
    if (!f.u.allFinite())
      throw liemap::DivergenceError(
          "fdm_simulate: diverged at step " + std::to_string(k),
          static_cast<std::size_t>(k - 1));
  }
  f.t = cfg.t_end;
  return f;
}

namespace {

// Bivariate series in the normalized spacings (a, b), truncated at total
// degree q: entry (ia, ib) holds the coefficient of a^ia * b^ib.
using Poly2 = Eigen::MatrixXd;

Poly2 pzero(int q) { return Poly2::Zero(q + 1, q + 1); }

Poly2 pmul(const Poly2& A, const Poly2& B) {
  const int q = static_cast<int>(A.rows()) - 1;
  Poly2 C = pzero(q);
  for (int ia = 0; ia <= q; ++ia)
    for (int ib = 0; ia + ib <= q; ++ib) {
      if (A(ia, ib) == 0.0) continue;
      for (int ja = 0; ia + ib + ja <= q; ++ja)
        for (int jb = 0; ia + ib + ja + jb <= q; ++jb)
          C(ia + ja, ib + jb) += A(ia, ib) * B(ja, jb);
    }
  return C;
}

// 1/(1 + t) for a series t with no constant term (Horner form of the
// alternating geometric series; exact to the carried order).
Poly2 geom_inverse(const Poly2& t) {
  const int q = static_cast<int>(t.rows()) - 1;
  Poly2 R = pzero(q);
  R(0, 0) = 1.0;
  for (int k = 0; k < q; ++k) {
    R = -pmul(t, R);
    R(0, 0) += 1.0;
  }
  return R;
}

}  // namespace

liemap::PolynomialSystem stencil_system(const BurgersConfig& cfg) {
  cfg.validate();
  if (cfg.q < 1) throw std::invalid_argument("stencil_system: q must be >= 1");
  const int r = cfg.r;
  const int n = 4 * r + 1;
  const int cap = std::min(1 + cfg.q, cfg.K);
  liemap::PolynomialSystem sys(n, cap);

  const auto s_var = [r](int j) { return j + r; };      // j = -r..r-1
  const auto u_var = [r](int j) { return 3 * r + j; };  // j = -r..r

  // spacings follow the velocity difference of their endpoints
  for (int j = -r; j <= r - 1; ++j) {
    polybasis::MultiIndex ep(n, 0), em(n, 0);
    ep[u_var(j + 1)] = 1;
    em[u_var(j)] = 1;
    sys.add_term(s_var(j), ep, 1.0);
    sys.add_term(s_var(j), em, -1.0);
  }

  // admissible spacing order once the total degree cap (value factor included)
  // is applied
  const int qe = std::min(cfg.q, cfg.K - 1);
  Poly2 a = pzero(qe), b = pzero(qe), h = pzero(qe);
  if (qe >= 1) {
    a(1, 0) = 1.0;
    b(0, 1) = 1.0;
    h(1, 0) = 0.5;  // (a + b) / 2, so that 2 + a + b = 2 (1 + h)
    h(0, 1) = 0.5;
  }
  const Poly2 inv_a = geom_inverse(a);
  const Poly2 inv_b = geom_inverse(b);
  const Poly2 inv_sum = 0.5 * geom_inverse(h);  // 1 / (2 + a + b)
  const Poly2 g[3] = {pmul(inv_a, inv_sum),   // weight of u_{j-1}
                      pmul(inv_a, inv_b),     // weight of u_j
                      pmul(inv_b, inv_sum)};  // weight of u_{j+1}
  const double sign[3] = {1.0, -1.0, 1.0};
  const double factor = cfg.nu * 2.0 / (cfg.dx * cfg.dx);

  for (int j = -r + 1; j <= r - 1; ++j)
    for (int which = 0; which < 3; ++which)
      for (int ia = 0; ia <= qe; ++ia)
        for (int ib = 0; ia + ib <= qe; ++ib) {
          const double c = g[which](ia, ib);
          if (c == 0.0) continue;
          polybasis::MultiIndex e(n, 0);
          e[s_var(j - 1)] += ia;
          e[s_var(j)] += ib;
          e[u_var(j + which - 1)] += 1;
          sys.add_term(u_var(j), e,
                       sign[which] * factor * c / std::pow(cfg.dx, ia + ib));
        }
  return sys;
}

StencilMap build_stencil_map(const BurgersConfig& cfg, const liemap::BuildOptions& build) {
  const liemap::PolynomialSystem window = stencil_system(cfg);
  const int r = cfg.r;
  const int K = cfg.K;
  const int n = 4 * r + 1;

  // append the quadrature variable z' = u_center as the last component
  liemap::PolynomialSystem aug(n + 1, window.max_deg());
  for (int d = 0; d <= window.max_deg(); ++d) {
    const Eigen::MatrixXd& P = window.coeffs[d];
    if (P.size() == 0) continue;
    const polybasis::MonomialBasis cols = polybasis::basis(n, d);
    for (Eigen::Index c = 0; c < P.cols(); ++c)
      for (int v = 0; v < n; ++v)
        if (P(v, c) != 0.0) {
          polybasis::MultiIndex e = cols.entries[c];
          e.push_back(0);
          aug.add_term(v, e, P(v, c));
        }
  }
  {
    polybasis::MultiIndex e(n + 1, 0);
    e[3 * r] = 1;
    aug.add_term(n, e, 1.0);
  }

  const liemap::PolynomialMap full = liemap::build_map(aug, cfg.dt, K, build);

  StencilMap out;
  out.r = r;
  out.order = K;
  out.dt = cfg.dt;
  out.dx = cfg.dx;
  out.nu = cfg.nu;
  out.basis = polybasis::StackedBasis(n, K);
  out.value_weights = Eigen::VectorXd::Zero(out.basis.size());
  out.shift_weights = Eigen::VectorXd::Zero(out.basis.size());

  for (int d = 0; d <= K; ++d) {
    const polybasis::MonomialBasis cols = polybasis::basis(n + 1, d);
    const Eigen::MatrixXd& W = full.weights[d];
    for (Eigen::Index c = 0; c < W.cols(); ++c) {
      const polybasis::MultiIndex& e = cols.entries[c];
      if (e.back() != 0) continue;  // z starts at 0: those columns never fire
      const polybasis::MultiIndex w(e.begin(), e.end() - 1);
      const long long wi = out.basis.stacked_index(d, w);
      out.value_weights[wi] = W(3 * r, c);
      out.shift_weights[wi] = W(n, c);
    }
  }
  return out;
}

Field step_field(const StencilMap& map, const Field& f, bool parallel) {
  const Eigen::Index nx = f.x.size();
  const int r = map.r;
  if (f.u.size() != nx) throw std::invalid_argument("step_field: x/u length mismatch");
  if (nx < 2 * r + 1)
    throw std::invalid_argument("step_field: field shorter than the window");

  Field out;
  out.x.resize(nx);
  out.u.resize(nx);
  out.t = f.t + map.dt;

  const auto advance = [&](Eigen::Index i) {
    Eigen::VectorXd w(4 * r + 1);
    // positions of the window nodes, unwrapped across the periodic seam
    double xprev = 0.0;
    for (int j = -r; j <= r; ++j) {
      const long long k = static_cast<long long>(i) + j;
      const long long idx = ((k % nx) + nx) % nx;
      const double xk = f.x[idx] + kTwoPi * static_cast<double>((k - idx) / nx);
      if (j > -r) w[j + r - 1] = xk - xprev - map.dx;
      xprev = xk;
      w[3 * r + j] = f.u[idx];
    }
    const Eigen::VectorXd mono = polybasis::stacked_monomials(w, map.order);
    out.u[i] = map.value_weights.dot(mono);
    out.x[i] = f.x[i] + map.shift_weights.dot(mono);
  };

#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < nx; ++i) advance(i);
  } else {
    for (Eigen::Index i = 0; i < nx; ++i) advance(i);
  }
#else
  (void)parallel;
  for (Eigen::Index i = 0; i < nx; ++i) advance(i);
#endif

  if (!out.x.allFinite() || !out.u.allFinite())
    throw liemap::DivergenceError("step_field: non-finite node state", 0);
  return out;
}

namespace {

double mse_against_analytic(const Field& f, double t, double nu) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.x.size(); ++i) {
    const double xm = f.x[i] - kTwoPi * std::floor(f.x[i] / kTwoPi);
    const double d = f.u[i] - analytic_u(t, xm, nu);
    acc += d * d;
  }
  return acc / static_cast<double>(f.x.size());
}

BenchRow run_map_rows(const StencilMap& map, const BurgersConfig& cfg,
                      const std::string& label, bool parallel) {
  BenchRow row;
  row.method = label;
  row.time_step = cfg.dt;
  row.nx = cfg.nx;
  row.steps = cfg.steps();
  Field f = initial_field(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  for (long long k = 1; k <= row.steps; ++k) {
    try {
      f = step_field(map, f, parallel);
    } catch (const liemap::DivergenceError&) {
      row.diverged_at = k;
      break;
    }
  }
  row.elapsed_seconds = elapsed_since(t0);
  row.mse_final = row.diverged_at >= 0 ? std::numeric_limits<double>::quiet_NaN()
                                       : mse_against_analytic(f, cfg.t_end, cfg.nu);
  return row;
}

}  // namespace

std::vector<BenchRow> benchmark(const BurgersConfig& cfg_fdm, const BurgersConfig& cfg_map,
                                const liemap::BuildOptions& build) {
  cfg_fdm.validate();
  cfg_map.validate();
  if (cfg_fdm.nu != cfg_map.nu)
    throw std::invalid_argument("benchmark: viscosities differ");
  if (cfg_fdm.nx != cfg_map.nx)
    throw std::invalid_argument("benchmark: mesh sizes differ");
  if (std::abs(cfg_fdm.t_end - cfg_map.t_end) > 1e-12)
    throw std::invalid_argument("benchmark: final times differ");

  std::vector<BenchRow> rows;

  {
    BenchRow row;
    row.method = "fdm";
    row.time_step = cfg_fdm.dt;
    row.nx = cfg_fdm.nx;
    row.steps = cfg_fdm.steps();
    Field f = initial_field(cfg_fdm);
    const auto t0 = std::chrono::steady_clock::now();
    for (long long k = 1; k <= row.steps; ++k) {
      f.u = fdm_step(f.u, cfg_fdm.dx, cfg_fdm.dt, cfg_fdm.nu);
      if (!f.u.allFinite()) {
        row.diverged_at = k;
        break;
      }
    }
    row.elapsed_seconds = elapsed_since(t0);
    row.mse_final = row.diverged_at >= 0
                        ? std::numeric_limits<double>::quiet_NaN()
                        : mse_against_analytic(f, cfg_fdm.t_end, cfg_fdm.nu);
    rows.push_back(row);
  }

  const StencilMap map = build_stencil_map(cfg_map, build);  // excluded from timing
  rows.push_back(run_map_rows(map, cfg_map, "map", false));
#ifdef _OPENMP
  rows.push_back(run_map_rows(map, cfg_map, "map-parallel", true));
#endif
  return rows;
}

}  // namespace burgers
