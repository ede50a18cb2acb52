#include "mvdeg/graph.hpp"

#include <cmath>

#include "mvdeg/error.hpp"

namespace mvdeg {

WeightedGraph::WeightedGraph(Eigen::MatrixXd weights, bool directed) : weights_(std::move(weights)), directed_(directed) {
  if (weights_.rows() < 1) throw Error(ErrorKind::InvalidArgument, "graph needs at least one vertex");
  if (weights_.rows() != weights_.cols()) throw Error(ErrorKind::Dimension, "graph weight matrix is not square");
  const Eigen::Index n = weights_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "graph weight (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") must be finite and nonnegative");
      }
      if (!directed_ && w != weights_(j, i)) {
        throw Error(ErrorKind::InvalidArgument, "undirected graph weights are not symmetric at (" +
                                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  descriptor_ = "custom(" + std::to_string(n) + ")";
}

std::size_t WeightedGraph::edge_count() const { return static_cast<std::size_t>((weights_.array() > 0.0).count()); }

WeightedGraph WeightedGraph::with_descriptor(std::string d) const {
  WeightedGraph g = *this;
  g.descriptor_ = std::move(d);
  return g;
}

WeightedGraph build_zero_graph(std::size_t p) {
  if (p == 0) throw Error(ErrorKind::InvalidArgument, "zero graph needs p >= 1");
  const auto n = static_cast<Eigen::Index>(p);
  return WeightedGraph(Eigen::MatrixXd::Zero(n, n), false).with_descriptor("zero(" + std::to_string(p) + ")");
}

WeightedGraph build_complete_graph(std::size_t p) {
  if (p == 0) throw Error(ErrorKind::InvalidArgument, "complete graph needs p >= 1");
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  w.diagonal().setZero();
  return WeightedGraph(std::move(w), false).with_descriptor("complete(" + std::to_string(p) + ")");
}

WeightedGraph build_gaussian_kernel_graph(const StationLayout& layout, double sigma1_sq, double sigma2,
                                          bool self_loops) {
  if (!(sigma1_sq > 0.0) || !std::isfinite(sigma1_sq)) throw Error(ErrorKind::InvalidArgument, "sigma1_sq must be > 0");
  if (!(sigma2 > 0.0) || std::isnan(sigma2)) throw Error(ErrorKind::InvalidArgument, "sigma2 must be > 0");
  const std::size_t n = layout.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "station layout is empty");
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = layout.positions[i];
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error(ErrorKind::InvalidArgument, "station " + std::to_string(i) + " has non-finite coordinates");
    }
  }

  const auto sz = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(sz, sz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(layout.positions[i].first - layout.positions[j].first,
                                  layout.positions[i].second - layout.positions[j].second);
      const double v = d <= sigma2 ? std::exp(-(d * d) / (2.0 * sigma1_sq)) : 0.0;
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  if (self_loops) w.diagonal().setOnes();
  return WeightedGraph(std::move(w), false).with_descriptor("gaussian(" + std::to_string(n) + ")");
}

WeightedGraph estimate_correlation_graph(const MultivariateSignal& signal) {
  const std::size_t p = signal.channels();
  const std::size_t n = signal.samples();
  if (p < 2) throw Error(ErrorKind::InvalidArgument, "correlation graph needs p >= 2");
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "correlation graph needs N >= 3");

  // Centered channels and their norms.
  std::vector<std::vector<double>> centered(p);
  std::vector<double> norm(p);
  for (std::size_t ch = 0; ch < p; ++ch) {
    const double mu = signal.channel_mean(ch);
    centered[ch].resize(n);
    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      centered[ch][t] = signal.at(ch, t) - mu;
      ss += centered[ch][t] * centered[ch][t];
    }
    if (signal.channel_sd(ch) == 0.0 || ss == 0.0) {
      throw Error(ErrorKind::Degenerate, "channel " + std::to_string(ch + 1) + " (" + signal.labels()[ch] +
                                             ") has zero variance");
    }
    norm[ch] = std::sqrt(ss);
  }

  const auto sz = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(sz, sz);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < n; ++t) dot += centered[i][t] * centered[j][t];
      const double r = std::min(1.0, std::abs(dot) / (norm[i] * norm[j]));
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
    }
  }
  return WeightedGraph(std::move(w), false).with_descriptor("correlation-estimated(" + std::to_string(p) + ")");
}

WeightedGraph correlation_matrix_graph(const Eigen::MatrixXd& corr) {
  if (corr.rows() != corr.cols()) throw Error(ErrorKind::Dimension, "correlation matrix is not square");
  Eigen::MatrixXd w = corr.cwiseAbs();
  w.diagonal().setZero();
  // Symmetrize exactly so tiny asymmetries in user input do not trip validation.
  Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  return WeightedGraph(std::move(sym), false)
      .with_descriptor("correlation-theoretical(" + std::to_string(corr.rows()) + ")");
}

}  // namespace mvdeg
