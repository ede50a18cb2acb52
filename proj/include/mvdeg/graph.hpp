#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mvdeg/signal.hpp"

namespace mvdeg {

/// Square nonnegative weight matrix on n vertices. Undirected graphs are
/// symmetric. Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph(Eigen::MatrixXd weights, bool directed);

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  bool directed() const noexcept { return directed_; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  double operator()(std::size_t i, std::size_t j) const { return weights_(i, j); }

  bool is_zero() const { return weights_.isZero(0.0); }
  /// Number of strictly positive entries.
  std::size_t edge_count() const;

  /// Short human-readable tag recorded in curve metadata (e.g. "zero(3)").
  const std::string& descriptor() const noexcept { return descriptor_; }
  WeightedGraph with_descriptor(std::string d) const;

 private:
  Eigen::MatrixXd weights_;
  bool directed_;
  std::string descriptor_;
};

struct StationLayout {
  std::vector<std::string> ids;
  std::vector<std::pair<double, double>> positions;

  std::size_t size() const noexcept { return positions.size(); }
};

WeightedGraph build_zero_graph(std::size_t p);
WeightedGraph build_complete_graph(std::size_t p);

/// Thresholded Gaussian kernel on Euclidean station distances:
/// w(i,j) = exp(-d^2 / (2 sigma1_sq)) when d <= sigma2, else 0.
/// The diagonal is zero unless `self_loops` is set (then it is 1, the literal
/// kernel value at d = 0).
WeightedGraph build_gaussian_kernel_graph(const StationLayout& layout, double sigma1_sq, double sigma2,
                                          bool self_loops = false);

/// Absolute Pearson correlation between channels, zero diagonal.
WeightedGraph estimate_correlation_graph(const MultivariateSignal& signal);

/// |corr| off-diagonal with zero diagonal, for a known correlation matrix.
WeightedGraph correlation_matrix_graph(const Eigen::MatrixXd& corr);

}  // namespace mvdeg
