#include "liemap/system.hpp"

#include <cmath>
#include <stdexcept>

namespace liemap {

PolynomialSystem::PolynomialSystem(int n_, int max_deg) : n(n_) {
  if (n < 1) throw std::invalid_argument("PolynomialSystem: dimension must be >= 1");
  if (max_deg < 0) throw std::invalid_argument("PolynomialSystem: max degree must be >= 0");
  for (int d = 0; d <= max_deg; ++d)
    coeffs.push_back(Eigen::MatrixXd::Zero(n, polybasis::basis_dim(n, d)));
}

void PolynomialSystem::add_term(int target, const polybasis::MultiIndex& exponents,
                                double coeff) {
  if (target < 0 || target >= n)
    throw std::invalid_argument("add_term: target component out of range");
  if (static_cast<int>(exponents.size()) != n)
    throw std::invalid_argument("add_term: exponent vector has wrong dimension");
  for (int e : exponents)
    if (e < 0) throw std::invalid_argument("add_term: negative exponent");
  if (!std::isfinite(coeff)) throw std::invalid_argument("add_term: coefficient must be finite");
  const int d = polybasis::degree_of(exponents);
  while (max_deg() < d)
    coeffs.push_back(Eigen::MatrixXd::Zero(n, polybasis::basis_dim(n, max_deg() + 1)));
  const int col = polybasis::index_of(polybasis::basis(n, d), exponents);
  coeffs[d](target, col) += coeff;
}

Eigen::VectorXd PolynomialSystem::eval(const Eigen::VectorXd& X) const {
  if (X.size() != n) throw std::invalid_argument("eval: state dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int d = 0; d <= max_deg(); ++d) {
    if (coeffs[d].size() == 0 || coeffs[d].isZero(0.0)) continue;
    out += coeffs[d] * polybasis::reduced_kron(X, d);
  }
  return out;
}

}  // namespace liemap
