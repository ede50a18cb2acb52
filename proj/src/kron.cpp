#include "mvdeg/kron.hpp"

#include <omp.h>

#include <limits>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "mvdeg/error.hpp"

namespace mvdeg {

int max_threads() noexcept { return omp_get_max_threads(); }
void set_threads(int n) noexcept {
  if (n > 0) omp_set_num_threads(n);
}

namespace {

void check_dense_cap(std::size_t side, std::size_t cap) {
  if (side > cap) {
    throw Error(ErrorKind::SizeCap, "dense matrix of side " + std::to_string(side) + " exceeds cap " +
                                        std::to_string(cap) + "; use the matrix-free apply_hop path");
  }
}

// Row-major copy of a p x p matrix plus its row sums.
struct FlatPower {
  std::vector<double> entries;
  std::vector<double> row_sums;
};

FlatPower flatten(const Eigen::MatrixXd& m) {
  const auto p = static_cast<std::size_t>(m.rows());
  FlatPower f{std::vector<double>(p * p), std::vector<double>(p, 0.0)};
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double w = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      f.entries[i * p + j] = w;
      f.row_sums[i] += w;
    }
  }
  return f;
}

}  // namespace

Eigen::MatrixXd PathShift::dense() const {
  const auto sz = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sz, sz);
  for (std::size_t i = 0; i + k < n; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + k)) = 1.0;
  return out;
}

PathShift path_power(long long n, long long k) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "path length must be >= 1");
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "hop order must be >= 0");
  return PathShift{static_cast<std::size_t>(n), static_cast<std::size_t>(k)};
}

std::vector<std::uint64_t> binomial_row(std::size_t k) {
  std::vector<std::uint64_t> row{1};
  row.reserve(k + 1);
  for (std::size_t r = 1; r <= k; ++r) {
    std::vector<std::uint64_t> next(r + 1, 1);
    for (std::size_t j = 1; j < r; ++j) {
      if (row[j - 1] > std::numeric_limits<std::uint64_t>::max() - row[j]) {
        throw Error(ErrorKind::Overflow, "binomial coefficient C(" + std::to_string(r) + "," + std::to_string(j) +
                                             ") overflows 64 bits");
      }
      next[j] = row[j - 1] + row[j];
    }
    row = std::move(next);
  }
  return row;
}

std::vector<Eigen::MatrixXd> channel_powers(const Eigen::MatrixXd& a, std::size_t k) {
  std::vector<Eigen::MatrixXd> powers;
  powers.reserve(k + 1);
  powers.push_back(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  for (std::size_t i = 1; i <= k; ++i) powers.push_back(powers.back() * a);
  return powers;
}

ProductPower product_power_terms(std::size_t n, const WeightedGraph& channel_graph, std::size_t k) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "path length must be >= 1");
  const auto coeffs = binomial_row(k);
  const auto powers = channel_powers(channel_graph.weights(), k);
  ProductPower out{n, k, {}};
  out.terms.reserve(k + 1);
  for (std::size_t j = 0; j <= k; ++j) out.terms.push_back({coeffs[j], PathShift{n, j}, powers[k - j]});
  return out;
}

Eigen::MatrixXd ProductPower::expand(std::size_t dense_cap) const {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty product power");
  const auto p = static_cast<std::size_t>(terms.front().channel_power.rows());
  check_dense_cap(n * p, dense_cap);
  const auto side = static_cast<Eigen::Index>(n * p);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(side, side);
  for (const auto& term : terms) {
    if (term.path.is_zero()) continue;
    out += static_cast<double>(term.coefficient) *
           Eigen::MatrixXd(Eigen::kroneckerProduct(term.path.dense(), term.channel_power));
  }
  return out;
}

HopVector apply_hop(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t k,
                    Execution exec) {
  const std::size_t p = signal.channels();
  const std::size_t n = signal.samples();
  if (channel_graph.size() != p) {
    throw Error(ErrorKind::Dimension, "channel graph has " + std::to_string(channel_graph.size()) +
                                          " vertices but the signal has " + std::to_string(p) + " channels");
  }

  const auto coeffs = binomial_row(k);
  std::vector<FlatPower> powers;
  for (const auto& m : channel_powers(channel_graph.weights(), k)) powers.push_back(flatten(m));
  std::vector<double> binom(coeffs.begin(), coeffs.end());

  const auto v = signal.vectorized();
  HopVector out{std::vector<double>(n * p), std::vector<std::uint8_t>(n * p)};

  // Entry (t, ch) of A^k v is sum_j C(k,j) [t+j < N] sum_d (A_chan^(k-j))(ch,d) v(t+j, d);
  // its row sum is sum_j C(k,j) [t+j < N] rowsum(A_chan^(k-j))(ch).
  const auto n_signed = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (long long ts = 0; ts < n_signed; ++ts) {
    const auto t = static_cast<std::size_t>(ts);
    for (std::size_t ch = 0; ch < p; ++ch) {
      double aggregate = 0.0;
      double row_sum = 0.0;
      for (std::size_t j = 0; j <= k && t + j < n; ++j) {
        const FlatPower& q = powers[k - j];
        const double* src = v.data() + (t + j) * p;
        double partial;
        if (j == k) {
          partial = src[ch];
        } else {
          partial = 0.0;
          const double* row = q.entries.data() + ch * p;
          for (std::size_t d = 0; d < p; ++d) partial += row[d] * src[d];
        }
        aggregate += binom[j] * partial;
        row_sum += binom[j] * q.row_sums[ch];
      }
      const std::size_t i = t * p + ch;
      out.valid[i] = normalize_hop(aggregate, row_sum, out.values[i]) ? 1 : 0;
    }
  }
  return out;
}

bool HopBasis::row_valid(std::size_t i) const noexcept {
  for (const auto& mask : valid) {
    if (!mask[i]) return false;
  }
  return true;
}

HopBasis build_hop_basis(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t m,
                         Execution exec) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "embedding dimension m must be >= 2");
  HopBasis basis{signal.samples(), signal.channels(), {}, {}};
  basis.columns.reserve(m);
  basis.valid.reserve(m);
  const std::size_t p = signal.channels();
  const std::size_t n = signal.samples();
  for (std::size_t k = 0; k < m; ++k) {
    HopVector hop = apply_hop(signal, channel_graph, k, exec);
    // Temporal support: the time index must have k successors on the path.
    for (std::size_t i = (n > k ? (n - k) * p : 0); i < n * p; ++i) hop.valid[i] = 0;
    basis.columns.push_back(std::move(hop.values));
    basis.valid.push_back(std::move(hop.valid));
  }
  return basis;
}

Eigen::MatrixXd path_adjacency(std::size_t n) { return PathShift{n, 1}.dense(); }

Eigen::MatrixXd product_adjacency(std::size_t n, const WeightedGraph& channel_graph, std::size_t dense_cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "path length must be >= 1");
  const std::size_t p = channel_graph.size();
  check_dense_cap(n * p, dense_cap);
  const auto np = static_cast<Eigen::Index>(n);
  const auto pp = static_cast<Eigen::Index>(p);
  return Eigen::kroneckerProduct(path_adjacency(n), Eigen::MatrixXd::Identity(pp, pp)) +
         Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(np, np), channel_graph.weights());
}

Eigen::MatrixXd naive_power(const Eigen::MatrixXd& m, std::size_t k, std::size_t dense_cap) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::Dimension, "naive_power needs a square matrix");
  check_dense_cap(static_cast<std::size_t>(m.rows()), dense_cap);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (std::size_t i = 0; i < k; ++i) out = out * m;
  return out;
}

}  // namespace mvdeg
