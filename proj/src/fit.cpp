#include "fit/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fit {

Eigen::MatrixXd design_matrix(const TrajectoryDataset& data, int K) {
  if (K < 1) throw std::invalid_argument("design_matrix: order must be >= 1");
  if (data.size() < 2)
    throw std::invalid_argument("design_matrix: need at least 2 states");
  const Eigen::Index m = static_cast<Eigen::Index>(data.size()) - 1;
  Eigen::VectorXd first = polybasis::stacked_monomials(data.states[0], K);
  Eigen::MatrixXd A(m, first.size());
  A.row(0) = first.transpose();
  for (Eigen::Index i = 1; i < m; ++i)
    A.row(i) = polybasis::stacked_monomials(data.states[i], K).transpose();
  return A;
}

static liemap::PolynomialMap map_from_solution(const Eigen::MatrixXd& S, int n, int K,
                                               double dt) {
  liemap::PolynomialMap map;
  map.n = n;
  map.order = K;
  map.dt = dt;
  long long off = 0;
  for (int d = 0; d <= K; ++d) {
    const long long dim = polybasis::basis_dim(n, d);
    map.weights.push_back(S.block(off, 0, dim, n).transpose());
    off += dim;
  }
  return map;
}

static Eigen::MatrixXd targets(const TrajectoryDataset& data) {
  const Eigen::Index m = static_cast<Eigen::Index>(data.size()) - 1;
  Eigen::MatrixXd B(m, data.n);
  for (Eigen::Index i = 0; i < m; ++i) B.row(i) = data.states[i + 1].transpose();
  return B;
}

static std::pair<liemap::PolynomialMap, FitReport> solve_lsq(const Eigen::MatrixXd& A,
                                                             const Eigen::MatrixXd& B,
                                                             int n, int K, double dt,
                                                             double ridge) {
  const Eigen::Index N = A.cols();

  Eigen::MatrixXd S;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  if (ridge > 0.0) {
    Eigen::MatrixXd Aaug(A.rows() + N, N);
    Aaug.topRows(A.rows()) = A;
    Aaug.bottomRows(N) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd Baug = Eigen::MatrixXd::Zero(Aaug.rows(), B.cols());
    Baug.topRows(B.rows()) = B;
    cod.compute(Aaug);
    S = cod.solve(Baug);
  } else {
    cod.compute(A);
    S = cod.solve(B);
  }

  FitReport rep;
  rep.ridge = ridge;
  rep.rank_deficient = cod.rank() < N;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  rep.condition = (sv.size() > 0 && sv(sv.size() - 1) > 0.0)
                      ? sv(0) / sv(sv.size() - 1)
                      : std::numeric_limits<double>::infinity();
  rep.mse = (A * S - B).squaredNorm() / static_cast<double>(A.rows() * B.cols());

  liemap::PolynomialMap map = map_from_solution(S, n, K, dt);
  for (const auto& W : map.weights) rep.weight_norms.push_back(W.norm());
  return {std::move(map), std::move(rep)};
}

std::pair<liemap::PolynomialMap, FitReport> fit_pairs(
    const std::vector<Eigen::VectorXd>& inputs,
    const std::vector<Eigen::VectorXd>& targets, double dt, int K, double ridge) {
  if (K < 1) throw std::invalid_argument("fit_pairs: order must be >= 1");
  if (ridge < 0.0) throw std::invalid_argument("fit_pairs: ridge must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("fit_pairs: dt must be > 0");
  if (inputs.empty() || inputs.size() != targets.size())
    throw std::invalid_argument("fit_pairs: need equally many inputs and targets");
  const int n = static_cast<int>(inputs[0].size());
  if (n < 1) throw std::invalid_argument("fit_pairs: states must be non-empty");
  const Eigen::Index m = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd A(m, polybasis::StackedBasis(n, K).size());
  Eigen::MatrixXd B(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (inputs[i].size() != n || targets[i].size() != n)
      throw std::invalid_argument("fit_pairs: inconsistent state dimensions");
    A.row(i) = polybasis::stacked_monomials(inputs[i], K).transpose();
    B.row(i) = targets[i].transpose();
  }
  return solve_lsq(A, B, n, K, dt, ridge);
}

std::pair<liemap::PolynomialMap, FitReport> fit_map(const TrajectoryDataset& data,
                                                    int K, double ridge) {
  if (ridge < 0.0) throw std::invalid_argument("fit_map: ridge must be >= 0");
  const Eigen::MatrixXd A = design_matrix(data, K);
  const Eigen::MatrixXd B = targets(data);
  return solve_lsq(A, B, data.n, K, data.dt, ridge);
}

std::pair<liemap::PolynomialMap, FitReport> refine_map(const liemap::PolynomialMap& init,
                                                       const TrajectoryDataset& data,
                                                       int max_iters, double step) {
  const int K = init.order;
  const Eigen::MatrixXd A = design_matrix(data, K);
  const Eigen::MatrixXd B = targets(data);
  const Eigen::Index N = A.cols();

  Eigen::MatrixXd S(N, init.n);
  long long off = 0;
  for (int d = 0; d <= K; ++d) {
    S.block(off, 0, init.weights[d].cols(), init.n) = init.weights[d].transpose();
    off += init.weights[d].cols();
  }

  if (step <= 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    const double smax = svd.singularValues()(0);
    step = 0.9 / (smax * smax);
  }
  for (int it = 0; it < max_iters; ++it) {
    // gradient of (1/2)||AS - B||_F^2
    const Eigen::MatrixXd grad = A.transpose() * (A * S - B);
    S -= step * grad;
  }

  FitReport rep;
  rep.ridge = 0.0;
  rep.mse = (A * S - B).squaredNorm() / static_cast<double>(A.rows() * B.cols());
  liemap::PolynomialMap map = map_from_solution(S, init.n, K, init.dt);
  for (const auto& W : map.weights) rep.weight_norms.push_back(W.norm());
  return {std::move(map), std::move(rep)};
}

TrajectoryDataset predict(const liemap::PolynomialMap& map, const Eigen::VectorXd& X0,
                          std::size_t steps) {
  return liemap::iterate(map, X0, steps);
}

}  // namespace fit
