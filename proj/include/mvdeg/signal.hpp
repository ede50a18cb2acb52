#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mvdeg {

/// p channels x N samples of finite reals.
///
/// Storage is sample-major: value (t, ch) lives at index t * p + ch, which is
/// exactly the vectorization v used by the product-graph operators.
class MultivariateSignal {
 public:
  MultivariateSignal() = default;

  /// `sample_major` holds N*p values ordered as described above.
  MultivariateSignal(std::size_t channels, std::size_t samples, std::vector<double> sample_major,
                     std::vector<std::string> labels = {});

  /// Builds from one vector per channel (all of equal length).
  static MultivariateSignal from_channels(const std::vector<std::vector<double>>& channels,
                                          std::vector<std::string> labels = {});

  std::size_t channels() const noexcept { return p_; }
  std::size_t samples() const noexcept { return n_; }

  double at(std::size_t ch, std::size_t t) const noexcept { return values_[t * p_ + ch]; }
  double& at(std::size_t ch, std::size_t t) noexcept { return values_[t * p_ + ch]; }

  std::span<const double> vectorized() const noexcept { return values_; }
  std::vector<double> channel(std::size_t ch) const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Per-channel sample mean and SD (denominator N-1).
  double channel_mean(std::size_t ch) const;
  double channel_sd(std::size_t ch) const;

  friend bool operator==(const MultivariateSignal&, const MultivariateSignal&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

}  // namespace mvdeg
