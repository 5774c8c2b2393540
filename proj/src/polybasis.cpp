#include "polybasis/polybasis.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace polybasis {

static void enumerate(int n, int k, MultiIndex& prefix, std::vector<MultiIndex>& out) {
  if (n == 1) {
    prefix.push_back(k);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = k; a >= 0; --a) {
    prefix.push_back(a);
    enumerate(n - 1, k - a, prefix, out);
    prefix.pop_back();
  }
}

static MonomialBasis build_basis(int n, int k) {
  if (n < 1) throw std::invalid_argument("basis: dimension must be >= 1");
  if (k < 0) throw std::invalid_argument("basis: degree must be >= 0");
  MonomialBasis b;
  b.n = n;
  b.degree = k;
  MultiIndex prefix;
  prefix.reserve(n);
  enumerate(n, k, prefix, b.entries);
  for (int i = 0; i < static_cast<int>(b.entries.size()); ++i)
    b.position.emplace(b.entries[i], i);
  return b;
}

// Enumerations are memoized: evaluation paths hit the same (n, k) pairs once
// per node per step. Entries are never erased, so references stay valid.
static const MonomialBasis& cached_basis(int n, int k) {
  static std::map<std::pair<int, int>, MonomialBasis> cache;
  static std::mutex mu;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_basis(n, k)).first;
  return it->second;
}

MonomialBasis basis(int n, int k) { return cached_basis(n, k); }

long long basis_dim(int n, int k) {
  if (n < 1) throw std::invalid_argument("basis_dim: dimension must be >= 1");
  if (k < 0) throw std::invalid_argument("basis_dim: degree must be >= 0");
  // C(n+k-1, k) built incrementally; each partial product is itself a binomial,
  // so the division is exact.
  long long r = 1;
  for (long long i = 1; i <= k; ++i) {
    long long f = n - 1 + i;
    if (r > std::numeric_limits<long long>::max() / f)
      throw std::overflow_error("basis_dim: binomial overflow");
    r = r * f / i;
  }
  return r;
}

Eigen::VectorXd reduced_kron(const Eigen::VectorXd& X, int k) {
  if (!X.allFinite()) throw std::invalid_argument("reduced_kron: non-finite state");
  const int n = static_cast<int>(X.size());
  const MonomialBasis& b = cached_basis(n, k);
  Eigen::VectorXd out(b.entries.size());
  for (size_t i = 0; i < b.entries.size(); ++i) {
    double v = 1.0;
    for (int m = 0; m < n; ++m)
      for (int p = 0; p < b.entries[i][m]; ++p) v *= X[m];
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

Eigen::VectorXd stacked_monomials(const Eigen::VectorXd& X, int K) {
  if (K < 0) throw std::invalid_argument("stacked_monomials: K must be >= 0");
  const int n = static_cast<int>(X.size());
  long long total = 0;
  for (int d = 0; d <= K; ++d) total += basis_dim(n, d);
  Eigen::VectorXd out(total);
  long long off = 0;
  for (int d = 0; d <= K; ++d) {
    Eigen::VectorXd blk = reduced_kron(X, d);
    out.segment(off, blk.size()) = blk;
    off += blk.size();
  }
  return out;
}

int index_of(const MonomialBasis& b, const MultiIndex& a) {
  if (static_cast<int>(a.size()) != b.n)
    throw std::invalid_argument("index_of: dimension mismatch");
  if (degree_of(a) != b.degree)
    throw std::invalid_argument("index_of: degree mismatch");
  auto it = b.position.find(a);
  if (it == b.position.end())
    throw std::invalid_argument("index_of: multi-index not in basis");
  return it->second;
}

StackedBasis::StackedBasis(int n_, int K_) : n(n_), K(K_) {
  if (K < 0) throw std::invalid_argument("StackedBasis: K must be >= 0");
  offsets.resize(K + 2);
  offsets[0] = 0;
  for (int d = 0; d <= K; ++d) {
    blocks.push_back(basis(n, d));
    offsets[d + 1] = offsets[d] + static_cast<long long>(blocks[d].entries.size());
  }
}

long long StackedBasis::stacked_index(int d, const MultiIndex& a) const {
  if (d < 0 || d > K) throw std::invalid_argument("stacked_index: degree out of range");
  return offsets[d] + index_of(blocks[d], a);
}

}  // namespace polybasis
