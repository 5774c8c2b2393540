#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "burgers/burgers.hpp"
#include "fit/fit.hpp"
#include "json.hpp"
#include "liemap/errors.hpp"
#include "liemap/io.hpp"
#include "liemap/map.hpp"
#include "odebench/odebench.hpp"

namespace {

using nlohmann::json;

// exit contract: 0 success, 1 usage/format error, 2 numeric failure
int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const liemap::ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << " (residual " << e.residual << ")\n";
    return 2;
  } catch (const liemap::DivergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  }
}

long long integral_ratio(double num, double den, const std::string& what) {
  const double ratio = num / den;
  const long long k = std::llround(ratio);
  if (k < 0 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument(what + " must divide evenly (got ratio " +
                                std::to_string(ratio) + ")");
  return k;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

void write_field_csv(const burgers::Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << "x,u\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < f.x.size(); ++i) out << f.x[i] << ',' << f.u[i] << '\n';
}

int cmd_build_map(const std::string& sys_path, double dt, int order,
                  const std::string& backend, double tol, int substeps,
                  const std::string& out_path) {
  const liemap::PolynomialSystem sys = liemap::io::load_system(sys_path);
  liemap::BuildOptions opts;
  opts.backend = backend == "rk4" ? liemap::BuildBackend::rk4_substep
                                  : liemap::BuildBackend::taylor_exp;
  opts.tol = tol;
  opts.substeps = substeps;
  const liemap::PolynomialMap map = liemap::build_map(sys, dt, order, opts);
  liemap::io::save_map(map, out_path);
  std::cout << "build-map: n=" << map.n << " order=" << map.order << " dt=" << map.dt
            << " backend=" << backend << " -> " << out_path << '\n';
  return 0;
}

int cmd_simulate(const std::string& map_path, const std::vector<double>& x0_values,
                 long long steps, const std::string& out_path) {
  const liemap::PolynomialMap map = liemap::io::load_map(map_path);
  if (static_cast<int>(x0_values.size()) != map.n)
    throw std::invalid_argument("simulate: --x0 has " + std::to_string(x0_values.size()) +
                                " components but the map expects " + std::to_string(map.n));
  if (steps < 0) throw std::invalid_argument("simulate: --steps must be >= 0");

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open " + out_path + " for writing");
  out << "t";
  for (int c = 1; c <= map.n; ++c) out << ",x" << c;
  out << '\n' << std::setprecision(17);

  Eigen::VectorXd state = Eigen::Map<const Eigen::VectorXd>(x0_values.data(),
                                                            x0_values.size());
  const auto write_row = [&](long long k, const Eigen::VectorXd& s) {
    out << static_cast<double>(k) * map.dt;
    for (int c = 0; c < map.n; ++c) out << ',' << s[c];
    out << '\n';
  };
  write_row(0, state);
  for (long long k = 1; k <= steps; ++k) {
    try {
      state = liemap::apply(map, state);
    } catch (const liemap::DivergenceError&) {
      out << "# diverged at step " << k << '\n';
      out.flush();
      std::cerr << "numeric failure: diverged at step " << k << "; partial trajectory in "
                << out_path << '\n';
      return 2;
    }
    write_row(k, state);
  }
  std::cout << "simulate: " << steps + 1 << " rows -> " << out_path << '\n';
  return 0;
}

int cmd_fit(const std::string& traj_path, int order, double ridge, int refine_iters,
            const std::string& map_path, const std::string& report_path) {
  const liemap::TrajectoryDataset data = liemap::io::load_trajectory_csv(traj_path);
  auto [map, report] = fit::fit_map(data, order, ridge);
  if (refine_iters > 0) {
    auto refined = fit::refine_map(map, data, refine_iters);
    map = std::move(refined.first);
    report.mse = refined.second.mse;
    report.weight_norms = refined.second.weight_norms;
  }
  liemap::io::save_map(map, map_path);

  json rep;
  rep["input"] = traj_path;
  rep["samples"] = data.size();
  rep["n"] = data.n;
  rep["dt"] = data.dt;
  rep["order"] = order;
  rep["ridge"] = ridge;
  rep["refine_iters"] = refine_iters;
  rep["mse"] = report.mse;
  rep["condition"] = report.condition;
  rep["rank_deficient"] = report.rank_deficient;
  rep["weight_norms"] = report.weight_norms;
  write_json_file(rep, report_path);

  std::cout << "fit: order=" << order << " mse=" << report.mse
            << " condition=" << report.condition << " -> " << map_path << ", "
            << report_path << '\n';
  return 0;
}

int cmd_bench_vdp(const std::vector<int>& orders, double dt, double T, double oracle_h,
                  const std::string& out_path) {
  if (orders.empty()) throw std::invalid_argument("bench-vdp: --orders must be non-empty");
  for (int k : orders)
    if (k < 1) throw std::invalid_argument("bench-vdp: orders must be >= 1");
  const long long every = integral_ratio(dt, oracle_h, "bench-vdp: dt / oracle step");
  const long long steps = integral_ratio(T, dt, "bench-vdp: T / dt");

  const liemap::PolynomialSystem sys = odebench::vdp_system();
  const odebench::RhsFunction rhs = [&sys](const Eigen::VectorXd& x) {
    return sys.eval(x);
  };
  const std::vector<Eigen::Vector2d> ics = {
      {-2.0, 4.0}, {1.0, 2.0}, {2.0, -2.0}, {-3.0, -3.0}};

  std::vector<liemap::TrajectoryDataset> oracles;
  for (const auto& ic : ics)
    oracles.push_back(
        odebench::downsample(odebench::rk4_solve(rhs, ic, T, oracle_h),
                             static_cast<int>(every)));

  json rows = json::array();
  for (int K : orders) {
    const liemap::PolynomialMap map = liemap::build_map(sys, dt, K);
    double acc = 0.0;
    for (std::size_t i = 0; i < ics.size(); ++i) {
      const liemap::TrajectoryDataset traj =
          liemap::iterate(map, ics[i], static_cast<std::size_t>(steps));
      acc += odebench::mean_relative_error(traj, oracles[i]);
    }
    const double err = acc / static_cast<double>(ics.size());
    rows.push_back({{"order", K}, {"mean_relative_error", err}});
    std::cout << "order " << K << ": mean relative error " << err << '\n';
  }

  json rep;
  rep["dt"] = dt;
  rep["T"] = T;
  rep["oracle_h"] = oracle_h;
  json ics_json = json::array();
  for (const auto& ic : ics) ics_json.push_back({ic[0], ic[1]});
  rep["initial_conditions"] = std::move(ics_json);
  rep["rows"] = std::move(rows);
  write_json_file(rep, out_path);
  std::cout << "bench-vdp -> " << out_path << '\n';
  return 0;
}

int cmd_bench_burgers(double nu, int nx, double dt_fdm, double dt_map, double t_end,
                      int order, int r, int q, const std::string& out_path,
                      const std::string& dump_prefix) {
  burgers::BurgersConfig cfg_fdm;
  cfg_fdm.set_mesh(nx);
  cfg_fdm.nu = nu;
  cfg_fdm.dt = dt_fdm;
  cfg_fdm.t_end = t_end;
  cfg_fdm.K = order;
  cfg_fdm.r = r;
  cfg_fdm.q = q;
  burgers::BurgersConfig cfg_map = cfg_fdm;
  cfg_map.dt = dt_map;

  const std::vector<burgers::BenchRow> rows = burgers::benchmark(cfg_fdm, cfg_map);

  json jrows = json::array();
  for (const auto& row : rows) {
    json jr;
    jr["method"] = row.method;
    jr["time_step"] = row.time_step;
    jr["mesh"] = std::to_string(row.nx) + "x" + std::to_string(row.steps);
    jr["elapsed_seconds"] = row.elapsed_seconds;
    jr["mse_final"] = row.mse_final;  // NaN serializes as null
    jr["diverged_at"] = row.diverged_at;
    jrows.push_back(std::move(jr));
    std::cout << row.method << ": mesh " << row.nx << "x" << row.steps << ", "
              << row.elapsed_seconds << " s, ";
    if (row.diverged_at >= 0)
      std::cout << "DIVERGED at step " << row.diverged_at << '\n';
    else
      std::cout << "mse " << row.mse_final << '\n';
  }
  json rep;
  rep["nu"] = nu;
  rep["t_end"] = t_end;
  rep["order"] = order;
  rep["r"] = r;
  rep["q"] = q;
  rep["timing"] = "propagation wall-clock only; file I/O and map construction excluded";
  rep["rows"] = std::move(jrows);
  write_json_file(rep, out_path);
  std::cout << "bench-burgers -> " << out_path << '\n';

  if (!dump_prefix.empty()) {
    try {
      write_field_csv(burgers::fdm_simulate(cfg_fdm, burgers::initial_field(cfg_fdm).u),
                      dump_prefix + "fdm.csv");
    } catch (const liemap::DivergenceError& e) {
      std::cerr << "warning: fdm field dump skipped: " << e.what() << '\n';
    }
    try {
      const burgers::StencilMap map = burgers::build_stencil_map(cfg_map);
      burgers::Field f = burgers::initial_field(cfg_map);
      for (long long k = 0; k < cfg_map.steps(); ++k) f = burgers::step_field(map, f);
      write_field_csv(f, dump_prefix + "map.csv");
    } catch (const liemap::DivergenceError& e) {
      std::cerr << "warning: map field dump skipped: " << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial one-step maps for autonomous ODE systems"};
  app.require_subcommand(1);

  // build-map
  auto* build = app.add_subcommand("build-map", "Build a one-step map from a system file");
  std::string bm_system;
  double bm_dt = 0.0;
  int bm_order = 0;
  std::string bm_backend = "taylor";
  double bm_tol = 1e-13;
  int bm_substeps = 16;
  std::string bm_out = "map.json";
  build->add_option("system", bm_system, "PolynomialSystem JSON file")->required();
  build->add_option("--dt", bm_dt, "time step of the map")->required();
  build->add_option("--order", bm_order, "truncation order K")->required();
  build->add_option("--backend", bm_backend, "taylor or rk4")
      ->check(CLI::IsMember({"taylor", "rk4"}));
  build->add_option("--tol", bm_tol, "exponential series residual tolerance");
  build->add_option("--substeps", bm_substeps, "rk4 backend substeps");
  build->add_option("-o,--out", bm_out, "output map file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Iterate a map and stream a CSV trajectory");
  std::string sm_map;
  std::vector<double> sm_x0;
  long long sm_steps = 0;
  std::string sm_out = "trajectory.csv";
  sim->add_option("map", sm_map, "PolynomialMap JSON file")->required();
  sim->add_option("--x0", sm_x0, "initial state, comma separated (use --x0=-2,4)")
      ->required()
      ->delimiter(',');
  sim->add_option("--steps", sm_steps, "number of steps")->required();
  sim->add_option("-o,--out", sm_out, "output CSV file");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit map weights to a trajectory CSV");
  std::string ft_traj;
  int ft_order = 0;
  double ft_ridge = 0.0;
  int ft_refine = 0;
  std::string ft_map = "map.json";
  std::string ft_report = "report.json";
  fit_cmd->add_option("trajectory", ft_traj, "trajectory CSV file")->required();
  fit_cmd->add_option("--order", ft_order, "truncation order K")->required();
  fit_cmd->add_option("--ridge", ft_ridge, "ridge penalty");
  fit_cmd->add_option("--refine-iters", ft_refine, "gradient-descent refinement iterations");
  fit_cmd->add_option("-o,--out", ft_map, "output map file");
  fit_cmd->add_option("--report", ft_report, "output report file");

  // bench-vdp
  auto* bvdp = app.add_subcommand("bench-vdp", "Map-vs-RK4 accuracy sweep on the oscillator");
  std::vector<int> bv_orders = {3, 5, 7};
  double bv_dt = 0.01;
  double bv_T = 10.0;
  double bv_h = 1e-4;
  std::string bv_out = "report.json";
  bvdp->add_option("--orders", bv_orders, "map orders, comma separated")->delimiter(',');
  bvdp->add_option("--dt", bv_dt, "map time step");
  bvdp->add_option("--T", bv_T, "final time");
  bvdp->add_option("--oracle-h", bv_h, "reference RK4 step");
  bvdp->add_option("-o,--out", bv_out, "output report file");

  // bench-burgers
  auto* bbur = app.add_subcommand("bench-burgers",
                                  "Fixed-mesh scheme vs moving-node map comparison");
  double bb_nu = 0.07;
  int bb_nx = 1000;
  double bb_dt_fdm = 2.5e-4;
  double bb_dt_map = 1.25e-3;
  double bb_t_end = 0.5;
  int bb_order = 3;
  int bb_r = 2;
  int bb_q = 2;
  std::string bb_out = "report.json";
  std::string bb_dump;
  bbur->add_option("--nu", bb_nu, "viscosity");
  bbur->add_option("--nx", bb_nx, "node count (dx = 2*pi/nx)");
  bbur->add_option("--dt-fdm", bb_dt_fdm, "fixed-mesh time step");
  bbur->add_option("--dt-map", bb_dt_map, "map time step");
  bbur->add_option("--t-end", bb_t_end, "final time");
  bbur->add_option("--order", bb_order, "map truncation order K");
  bbur->add_option("--r", bb_r, "window half-width");
  bbur->add_option("--q", bb_q, "diffusion-weight expansion order");
  bbur->add_option("-o,--out", bb_out, "output report file");
  bbur->add_option("--dump-fields", bb_dump, "prefix for final-field CSV dumps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1
  }

  if (*build)
    return run_guarded([&] {
      return cmd_build_map(bm_system, bm_dt, bm_order, bm_backend, bm_tol, bm_substeps,
                           bm_out);
    });
  if (*sim)
    return run_guarded([&] { return cmd_simulate(sm_map, sm_x0, sm_steps, sm_out); });
  if (*fit_cmd)
    return run_guarded([&] {
      return cmd_fit(ft_traj, ft_order, ft_ridge, ft_refine, ft_map, ft_report);
    });
  if (*bvdp)
    return run_guarded([&] { return cmd_bench_vdp(bv_orders, bv_dt, bv_T, bv_h, bv_out); });
  if (*bbur)
    return run_guarded([&] {
      return cmd_bench_burgers(bb_nu, bb_nx, bb_dt_fdm, bb_dt_map, bb_t_end, bb_order,
                               bb_r, bb_q, bb_out, bb_dump);
    });
  return 1;
}
