#include "odebench/odebench.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "liemap/errors.hpp"

namespace odebench {

liemap::PolynomialSystem vdp_system() {
  liemap::PolynomialSystem sys(2, 3);
  sys.add_term(0, {0, 1}, 1.0);   // x' = y
  sys.add_term(1, {1, 0}, -1.0);  // y' = -x
  sys.add_term(1, {0, 1}, 1.0);   //      + y
  sys.add_term(1, {2, 1}, -1.0);  //      - x^2 y
  return sys;
}

liemap::TrajectoryDataset rk4_solve(const RhsFunction& rhs, const Eigen::VectorXd& X0,
                                    double T, double h) {
  if (h <= 0.0) throw std::invalid_argument("rk4_solve: step must be positive");
  if (T < h) throw std::invalid_argument("rk4_solve: T must be >= h");
  const double steps_real = T / h;
  const long long steps = std::llround(steps_real);
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real))
    throw std::invalid_argument("rk4_solve: T/h is not integral");

  liemap::TrajectoryDataset out;
  out.n = static_cast<int>(X0.size());
  out.dt = h;
  out.states.reserve(steps + 1);
  out.states.push_back(X0);
  Eigen::VectorXd s = X0;
  for (long long k = 1; k <= steps; ++k) {
    const Eigen::VectorXd k1 = rhs(s);
    const Eigen::VectorXd k2 = rhs(s + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(s + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!s.allFinite())
      throw liemap::DivergenceError("rk4_solve: non-finite state at step " +
                                        std::to_string(k),
                                    static_cast<std::size_t>(k - 1));
    out.states.push_back(s);
  }
  return out;
}

liemap::TrajectoryDataset downsample(const liemap::TrajectoryDataset& traj, int every) {
  if (every < 1) throw std::invalid_argument("downsample: stride must be >= 1");
  liemap::TrajectoryDataset out;
  out.n = traj.n;
  out.dt = traj.dt * every;
  for (std::size_t i = 0; i < traj.size(); i += every) out.states.push_back(traj.states[i]);
  return out;
}

double mean_relative_error(const liemap::TrajectoryDataset& pred,
                           const liemap::TrajectoryDataset& ref) {
  if (pred.size() != ref.size())
    throw std::invalid_argument("mean_relative_error: length mismatch");
  if (pred.size() < 2)
    throw std::invalid_argument("mean_relative_error: need at least 2 samples");
  if (std::abs(pred.dt - ref.dt) > 1e-12 * std::max(pred.dt, ref.dt))
    throw std::invalid_argument("mean_relative_error: time-step mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < ref.size(); ++i) {
    const double rn = ref.states[i].norm();
    if (rn == 0.0)
      throw std::invalid_argument("mean_relative_error: zero-norm reference sample");
    acc += (pred.states[i] - ref.states[i]).norm() / rn;
  }
  return acc / static_cast<double>(ref.size() - 1);
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& ref) {
  if (pred.size() != ref.size()) throw std::invalid_argument("mse: length mismatch");
  return (pred - ref).squaredNorm() / static_cast<double>(pred.size());
}

}  // namespace odebench
