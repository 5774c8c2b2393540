#pragma once

#include <Eigen/Dense>
#include <functional>

#include "liemap/system.hpp"
#include "liemap/trajectory.hpp"

namespace odebench {

using RhsFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// x' = y, y' = y - x - x^2 y: linear part [[0,1],[-1,1]] plus a single cubic
// coefficient -1 on x^2 y in the y row.
liemap::PolynomialSystem vdp_system();

// Classical fixed-step RK4, sampled every h; T/h must be integral within 1e-9.
liemap::TrajectoryDataset rk4_solve(const RhsFunction& rhs, const Eigen::VectorXd& X0,
                                    double T, double h);

// Keep every `every`-th sample (dt scales accordingly); plumbing for comparing
// a fine oracle against coarser map output.
liemap::TrajectoryDataset downsample(const liemap::TrajectoryDataset& traj, int every);

// Mean over samples i >= 1 of ||pred_i - ref_i||_2 / ||ref_i||_2.
double mean_relative_error(const liemap::TrajectoryDataset& pred,
                           const liemap::TrajectoryDataset& ref);

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& ref);

}  // namespace odebench
