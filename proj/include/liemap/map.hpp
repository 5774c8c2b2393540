#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "liemap/system.hpp"
#include "liemap/trajectory.hpp"
#include "polybasis/polybasis.hpp"

namespace liemap {

// One-step polynomial propagator Y = sum_d W[d] * X^[d] over time dt.
struct PolynomialMap {
  int n = 0;
  int order = 0;
  double dt = 0.0;
  std::vector<Eigen::MatrixXd> weights;  // weights[d]: n x basis_dim(n,d), d = 0..order
};

// Stacked N x N derivative matrix over StackedBasis(n, K): the assembly of all
// induced blocks. Row of the constant monomial is zero; block upper-triangular
// when the system has no constant term.
struct GeneratorMatrix {
  polybasis::StackedBasis basis;
  Eigen::MatrixXd D;
};

enum class BuildBackend { taylor_exp, rk4_substep };

struct BuildOptions {
  BuildBackend backend = BuildBackend::taylor_exp;
  double tol = 1e-13;  // residual tolerance of the exponential series
  int substeps = 16;   // RK4 backend substep count
};

// Induced (lifted) coefficient block mapping the degree-j monomial block to the
// time derivative of the degree-i block: the product rule
//   d/dt x^a = sum_m a_m x^{a - e_m} x'_m
// routes P[j-i+1](m, b) into row a, column a - e_m + b with factor a_m.
// Degrees outside the system's range give a zero block.
Eigen::MatrixXd induced_block(const PolynomialSystem& sys, int i, int j);

// Stacks induced_block(sys, i, j) for row degrees 1..K and column degrees 0..K;
// contributions beyond degree K are truncated.
GeneratorMatrix generator(const PolynomialSystem& sys, int K);

// Integrates M' = D M, M(0) = I over [0, dt] and extracts the degree-1 rows as
// W_0..W_K. The default backend is a scaling-and-squaring truncated-Taylor
// matrix exponential (throws ConvergenceError with the achieved residual if the
// series stalls); the RK4 backend exists for cross-checking.
PolynomialMap build_map(const PolynomialSystem& sys, double dt, int K,
                        const BuildOptions& opts = {});

// Y = sum_d W_d X^[d]; throws DivergenceError on non-finite output.
Eigen::VectorXd apply(const PolynomialMap& map, const Eigen::VectorXd& X);

// Repeated application; steps+1 samples at spacing map.dt. Divergence throws
// with the last valid sample index.
TrajectoryDataset iterate(const PolynomialMap& map, const Eigen::VectorXd& X0,
                          std::size_t steps);

}  // namespace liemap
