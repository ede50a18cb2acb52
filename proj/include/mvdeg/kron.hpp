#pragma once

// Powers of the Cartesian-product adjacency A = A_path (x) Id_p + Id_N (x) A_chan
// and their row-normalized action on a vectorized signal. The two Kronecker
// summands commute, so A^k = sum_j C(k,j) A_path^j (x) A_chan^(k-j), and
// A_path^j is a pure index shift. Nothing of size Np x Np is ever formed
// outside the dense oracle helpers at the bottom of this header.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvdeg/graph.hpp"
#include "mvdeg/parallel.hpp"
#include "mvdeg/signal.hpp"

namespace mvdeg {

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// k-th power of the directed-path adjacency on N vertices: ones at (i, i+k).
/// k = 0 is the identity; k >= N is the zero matrix.
struct PathShift {
  std::size_t n = 0;
  std::size_t k = 0;

  double operator()(std::size_t i, std::size_t j) const noexcept { return (j == i + k && j < n) ? 1.0 : 0.0; }
  bool is_zero() const noexcept { return k >= n; }
  Eigen::MatrixXd dense() const;
};

/// Throws InvalidArgument for negative k. Any k >= 0 is accepted.
PathShift path_power(long long n, long long k);

/// C(k, j) for j = 0..k via Pascal's rule; throws Overflow instead of wrapping.
std::vector<std::uint64_t> binomial_row(std::size_t k);

struct ProductPowerTerm {
  std::uint64_t coefficient;        // C(k, j)
  PathShift path;                   // A_path^j
  Eigen::MatrixXd channel_power;    // A_chan^(k-j)
};

/// Binomial expansion of (A_path (x) Id + Id (x) A_chan)^k, terms ordered by j.
struct ProductPower {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<ProductPowerTerm> terms;

  /// Dense sum of C(k,j) * kron(A_path^j, A_chan^(k-j)). Oracle use only.
  Eigen::MatrixXd expand(std::size_t dense_cap = kDefaultDenseCap) const;
};

ProductPower product_power_terms(std::size_t n, const WeightedGraph& channel_graph, std::size_t k);

/// A_chan^0 .. A_chan^k.
std::vector<Eigen::MatrixXd> channel_powers(const Eigen::MatrixXd& a, std::size_t k);

/// Row-normalized k-hop aggregate D A^k v. `valid[i] == 0` marks entries whose
/// row sum of A^k is zero; those values are set to 0.
struct HopVector {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
};

/// Matrix-free D A^k v, cost O(k N p^2). v is the sample-major vectorization
/// of `signal` (entry (t, ch) at t*p + ch).
HopVector apply_hop(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t k,
                    Execution exec = Execution::parallel);

/// The normalization step, kept in one place: value / row sum, or invalid.
inline bool normalize_hop(double aggregate, double row_sum, double& out) noexcept {
  if (row_sum > 0.0) {
    out = aggregate / row_sum;
    return true;
  }
  out = 0.0;
  return false;
}

/// Columns y_0..y_{m-1}. `valid[k][i]` is set only when the row sum of A^k at
/// i is positive *and* the time index t of i has a full k-step forward window
/// (t + k < N). Rows near the end of the path that are reached only through
/// channel edges do not carry a temporal pattern and are excluded.
struct HopBasis {
  std::size_t samples = 0;
  std::size_t channels = 0;
  std::vector<std::vector<double>> columns;
  std::vector<std::vector<std::uint8_t>> valid;

  std::size_t rows() const noexcept { return samples * channels; }
  std::size_t dimension() const noexcept { return columns.size(); }
  bool row_valid(std::size_t i) const noexcept;
};

HopBasis build_hop_basis(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t m,
                         Execution exec = Execution::parallel);

// --- dense oracles -------------------------------------------------------

Eigen::MatrixXd path_adjacency(std::size_t n);

/// A_path (x) Id_p + Id_N (x) A_chan as a dense (Np x Np) matrix.
Eigen::MatrixXd product_adjacency(std::size_t n, const WeightedGraph& channel_graph,
                                  std::size_t dense_cap = kDefaultDenseCap);

/// M^k by repeated multiplication.
Eigen::MatrixXd naive_power(const Eigen::MatrixXd& m, std::size_t k, std::size_t dense_cap = kDefaultDenseCap);

}  // namespace mvdeg
