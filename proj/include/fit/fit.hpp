#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "liemap/map.hpp"
#include "liemap/trajectory.hpp"

namespace fit {

using liemap::TrajectoryDataset;

struct FitReport {
  double mse = 0.0;                  // mean squared one-step residual (per entry)
  std::vector<double> weight_norms;  // Frobenius norm per degree
  double condition = 0.0;            // feature-matrix condition estimate
  double ridge = 0.0;
  bool rank_deficient = false;       // minimum-norm fallback was in effect
};

// Row i is stacked_monomials(X_i, K) for i = 0..m-1 (all states but the last).
Eigen::MatrixXd design_matrix(const TrajectoryDataset& data, int K);

// Closed-form minimizer of sum_i ||Y_i - sum_d W_d X_i^[d]||^2 (+ ridge) over
// explicit transition pairs (X_i, Y_i); rank-deficient designs yield the
// minimum-norm solution and set the report flag. dt is recorded on the map.
std::pair<liemap::PolynomialMap, FitReport> fit_pairs(
    const std::vector<Eigen::VectorXd>& inputs,
    const std::vector<Eigen::VectorXd>& targets, double dt, int K,
    double ridge = 0.0);

// Same minimizer over the consecutive pairs (X_i, X_{i+1}) of a trajectory.
std::pair<liemap::PolynomialMap, FitReport> fit_map(const TrajectoryDataset& data,
                                                    int K, double ridge = 0.0);

// Plain fixed-step gradient descent on the same loss, seeded at `init`. Exists
// to mirror an iterative-training procedure; on full-rank problems it converges
// to the closed-form minimizer. step <= 0 selects 0.9 / sigma_max^2.
std::pair<liemap::PolynomialMap, FitReport> refine_map(const liemap::PolynomialMap& init,
                                                       const TrajectoryDataset& data,
                                                       int max_iters, double step = 0.0);

// Alias of liemap::iterate exposed on fitted maps.
TrajectoryDataset predict(const liemap::PolynomialMap& map, const Eigen::VectorXd& X0,
                          std::size_t steps);

}  // namespace fit
