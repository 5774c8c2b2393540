#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polybasis/polybasis.hpp"

namespace liemap {

// Autonomous polynomial right-hand side x' = sum_d P[d] * x^[d], where P[d]
// is n x basis_dim(n,d) in graded-lex descending column order. Absent degrees
// are zero matrices.
struct PolynomialSystem {
  int n = 0;
  std::vector<Eigen::MatrixXd> coeffs;  // coeffs[d], d = 0..max_deg

  PolynomialSystem() = default;
  PolynomialSystem(int n_, int max_deg);

  int max_deg() const { return static_cast<int>(coeffs.size()) - 1; }

  // Accumulates coeff onto the monomial with the given exponents in the
  // target component's row (grows the degree range if needed).
  void add_term(int target, const polybasis::MultiIndex& exponents, double coeff);

  // F(X) evaluated numerically from the coefficient matrices.
  Eigen::VectorXd eval(const Eigen::VectorXd& X) const;
};

}  // namespace liemap
