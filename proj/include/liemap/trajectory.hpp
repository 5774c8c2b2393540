#pragma once

#include <Eigen/Dense>
#include <vector>

namespace liemap {

// Discrete state time series with uniform step dt starting at t0 = 0.
struct TrajectoryDataset {
  int n = 0;
  double dt = 0.0;
  std::vector<Eigen::VectorXd> states;

  std::size_t size() const { return states.size(); }
};

}  // namespace liemap
