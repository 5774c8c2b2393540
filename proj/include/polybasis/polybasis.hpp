#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

// Multi-index enumeration and reduced Kronecker powers. The ordering contract
// (graded-lex descending on exponents) is normative for every serialized matrix:
// basis(2,2) = (2,0),(1,1),(0,2).
namespace polybasis {

using MultiIndex = std::vector<int>;

inline int degree_of(const MultiIndex& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

struct MonomialBasis {
  int n = 0;
  int degree = 0;
  std::vector<MultiIndex> entries;
  std::map<MultiIndex, int> position;  // inverse of enumeration
};

// All degree-k multi-indices over n variables, graded-lex descending.
MonomialBasis basis(int n, int k);

// C(n+k-1, k) with exact integer arithmetic; throws std::overflow_error
// instead of wrapping.
long long basis_dim(int n, int k);

// Entry for multi-index a is prod_m x_m^{a_m}; k=0 gives the single entry 1.
Eigen::VectorXd reduced_kron(const Eigen::VectorXd& X, int k);

// Concatenation of reduced_kron(X, 0..K); first entry is always 1.
Eigen::VectorXd stacked_monomials(const Eigen::VectorXd& X, int K);

// Zero-based position of a in b; throws on degree/dimension mismatch.
int index_of(const MonomialBasis& b, const MultiIndex& a);

// Degrees 0..K concatenated with per-degree offsets into the stacked space.
struct StackedBasis {
  int n = 0;
  int K = 0;
  std::vector<MonomialBasis> blocks;   // blocks[d] = basis(n, d)
  std::vector<long long> offsets;      // offsets[d], offsets[K+1] = total size
  StackedBasis() = default;
  StackedBasis(int n_, int K_);
  long long size() const { return offsets.back(); }
  // Global stacked index of a degree-d multi-index.
  long long stacked_index(int d, const MultiIndex& a) const;
};

}  // namespace polybasis
