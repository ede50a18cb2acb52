#include "mvdeg/signal.hpp"

#include <cmath>

#include "mvdeg/error.hpp"

namespace mvdeg {

MultivariateSignal::MultivariateSignal(std::size_t channels, std::size_t samples, std::vector<double> sample_major,
                                       std::vector<std::string> labels)
    : p_(channels), n_(samples), values_(std::move(sample_major)), labels_(std::move(labels)) {
  if (p_ < 1) throw Error(ErrorKind::InvalidArgument, "signal needs at least one channel");
  if (n_ < 2) throw Error(ErrorKind::InvalidArgument, "signal needs at least two samples per channel");
  if (values_.size() != p_ * n_) throw Error(ErrorKind::Dimension, "signal value count does not match p*N");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::InvalidArgument, "non-finite value in channel " + std::to_string(i % p_) +
                                                  " at sample " + std::to_string(i / p_));
    }
  }
  if (labels_.empty()) {
    labels_.reserve(p_);
    for (std::size_t ch = 0; ch < p_; ++ch) labels_.push_back("ch" + std::to_string(ch + 1));
  } else if (labels_.size() != p_) {
    throw Error(ErrorKind::Dimension, "label count does not match channel count");
  }
}

MultivariateSignal MultivariateSignal::from_channels(const std::vector<std::vector<double>>& channels,
                                                     std::vector<std::string> labels) {
  if (channels.empty()) throw Error(ErrorKind::InvalidArgument, "signal needs at least one channel");
  const std::size_t p = channels.size();
  const std::size_t n = channels.front().size();
  std::vector<double> values(p * n);
  for (std::size_t ch = 0; ch < p; ++ch) {
    if (channels[ch].size() != n) throw Error(ErrorKind::Dimension, "channels have different lengths");
    for (std::size_t t = 0; t < n; ++t) values[t * p + ch] = channels[ch][t];
  }
  return MultivariateSignal(p, n, std::move(values), std::move(labels));
}

std::vector<double> MultivariateSignal::channel(std::size_t ch) const {
  std::vector<double> out(n_);
  for (std::size_t t = 0; t < n_; ++t) out[t] = at(ch, t);
  return out;
}

double MultivariateSignal::channel_mean(std::size_t ch) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < n_; ++t) sum += at(ch, t);
  return sum / static_cast<double>(n_);
}

double MultivariateSignal::channel_sd(std::size_t ch) const {
  // Exactly zero for constant channels; summation rounding must not leak a tiny SD.
  bool constant = true;
  for (std::size_t t = 1; t < n_ && constant; ++t) constant = at(ch, t) == at(ch, 0);
  if (constant) return 0.0;
  const double mu = channel_mean(ch);
  double ss = 0.0;
  for (std::size_t t = 0; t < n_; ++t) {
    const double d = at(ch, t) - mu;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n_ - 1));
}

}  // namespace mvdeg
