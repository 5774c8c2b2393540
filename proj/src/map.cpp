#include "liemap/map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "liemap/errors.hpp"

namespace liemap {

Eigen::MatrixXd induced_block(const PolynomialSystem& sys, int i, int j) {
  if (i < 1) throw std::invalid_argument("induced_block: row degree must be >= 1");
  if (j < 0) throw std::invalid_argument("induced_block: column degree must be >= 0");
  const int n = sys.n;
  const long long rows = polybasis::basis_dim(n, i);
  const long long cols = polybasis::basis_dim(n, j);
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(rows, cols);
  const int dF = j - i + 1;  // degree of the system term feeding this block
  if (dF < 0 || dF > sys.max_deg()) return blk;
  const Eigen::MatrixXd& P = sys.coeffs[dF];
  if (P.isZero(0.0)) return blk;

  const polybasis::MonomialBasis row_basis = polybasis::basis(n, i);
  const polybasis::MonomialBasis col_basis = polybasis::basis(n, j);
  const polybasis::MonomialBasis term_basis = polybasis::basis(n, dF);
  for (long long ri = 0; ri < rows; ++ri) {
    const polybasis::MultiIndex& a = row_basis.entries[ri];
    for (int m = 0; m < n; ++m) {
      if (a[m] == 0) continue;
      for (size_t ci = 0; ci < term_basis.entries.size(); ++ci) {
        const double p = P(m, static_cast<Eigen::Index>(ci));
        if (p == 0.0) continue;
        polybasis::MultiIndex g = a;
        g[m] -= 1;
        const polybasis::MultiIndex& b = term_basis.entries[ci];
        for (int t = 0; t < n; ++t) g[t] += b[t];
        blk(ri, polybasis::index_of(col_basis, g)) += a[m] * p;
      }
    }
  }
  return blk;
}

GeneratorMatrix generator(const PolynomialSystem& sys, int K) {
  if (K < 1) throw std::invalid_argument("generator: K must be >= 1");
  GeneratorMatrix g{polybasis::StackedBasis(sys.n, K), Eigen::MatrixXd()};
  const long long N = g.basis.size();
  g.D = Eigen::MatrixXd::Zero(N, N);
  for (int i = 1; i <= K; ++i)
    for (int j = 0; j <= K; ++j) {
      const int dF = j - i + 1;
      if (dF < 0 || dF > sys.max_deg()) continue;
      g.D.block(g.basis.offsets[i], g.basis.offsets[j],
                g.basis.offsets[i + 1] - g.basis.offsets[i],
                g.basis.offsets[j + 1] - g.basis.offsets[j]) = induced_block(sys, i, j);
    }
  return g;
}

// exp(A) by scaling and squaring of a truncated Taylor sum; the zero pattern of
// any degree-parity grading of A is preserved exactly, which is what makes the
// even-degree weights of odd vector fields come out as exact zeros.
static Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& A, double tol) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int s = 0;
  double scaled = norm;
  while (scaled > 0.5 && s < 64) {
    scaled /= 2.0;
    ++s;
  }
  const Eigen::MatrixXd B = A / std::ldexp(1.0, s);
  const Eigen::Index N = A.rows();
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(N, N);
  Eigen::MatrixXd sum = term;
  double residual = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term = (term * B) / static_cast<double>(k);
    sum += term;
    residual = term.norm() / sum.norm();
    if (residual <= tol) break;
  }
  if (!(residual <= tol))
    throw ConvergenceError("matrix exponential series did not converge", residual);
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

// RK4 on the linear matrix ODE M' = D M over S substeps.
static Eigen::MatrixXd expm_rk4(const Eigen::MatrixXd& D, int substeps) {
  const Eigen::Index N = D.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N);
  const double h = 1.0 / substeps;
  for (int k = 0; k < substeps; ++k) {
    Eigen::MatrixXd k1 = D * M;
    Eigen::MatrixXd k2 = D * (M + 0.5 * h * k1);
    Eigen::MatrixXd k3 = D * (M + 0.5 * h * k2);
    Eigen::MatrixXd k4 = D * (M + h * k3);
    M += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return M;
}

PolynomialMap build_map(const PolynomialSystem& sys, double dt, int K,
                        const BuildOptions& opts) {
  if (dt <= 0.0) throw std::invalid_argument("build_map: dt must be positive");
  if (K < 1) throw std::invalid_argument("build_map: order must be >= 1");
  if (opts.substeps < 1) throw std::invalid_argument("build_map: substeps must be >= 1");
  if (!(opts.tol >= 0.0)) throw std::invalid_argument("build_map: tol must be >= 0");
  GeneratorMatrix g = generator(sys, K);
  Eigen::MatrixXd M;
  if (opts.backend == BuildBackend::taylor_exp)
    M = expm_taylor(g.D * dt, opts.tol);
  else
    M = expm_rk4(g.D * dt, opts.substeps);

  PolynomialMap map;
  map.n = sys.n;
  map.order = K;
  map.dt = dt;
  const long long row0 = g.basis.offsets[1];  // degree-1 block rows
  for (int d = 0; d <= K; ++d)
    map.weights.push_back(M.block(row0, g.basis.offsets[d], sys.n,
                                  g.basis.offsets[d + 1] - g.basis.offsets[d]));
  return map;
}

Eigen::VectorXd apply(const PolynomialMap& map, const Eigen::VectorXd& X) {
  if (X.size() != map.n) throw std::invalid_argument("apply: state dimension mismatch");
  Eigen::VectorXd Y = Eigen::VectorXd::Zero(map.n);
  for (int d = 0; d <= map.order; ++d)
    Y += map.weights[d] * polybasis::reduced_kron(X, d);
  if (!Y.allFinite()) throw DivergenceError("apply: non-finite map output", 0);
  return Y;
}

TrajectoryDataset iterate(const PolynomialMap& map, const Eigen::VectorXd& X0,
                          std::size_t steps) {
  TrajectoryDataset out;
  out.n = map.n;
  out.dt = map.dt;
  out.states.reserve(steps + 1);
  out.states.push_back(X0);
  for (std::size_t k = 1; k <= steps; ++k) {
    Eigen::VectorXd next;
    try {
      next = apply(map, out.states.back());
    } catch (const DivergenceError&) {
      throw DivergenceError("iterate: diverged at step " + std::to_string(k), k - 1);
    }
    out.states.push_back(std::move(next));
  }
  return out;
}

}  // namespace liemap
