#include "mvdeg/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvdeg/error.hpp"

namespace mvdeg {

DispersionHistogram::DispersionHistogram(std::size_t m, std::size_t c) : m_(m), c_(c), alphabet_(1) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "pattern length must be >= 1");
  if (c < 2) throw Error(ErrorKind::InvalidArgument, "class count c must be >= 2");
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  for (std::size_t i = 0; i < m; ++i) {
    if (alphabet_ > kLimit / c) {
      throw Error(ErrorKind::Overflow, "pattern alphabet c^m = " + std::to_string(c) + "^" + std::to_string(m) +
                                           " does not fit in 62 bits");
    }
    alphabet_ *= c;
  }
}

std::uint64_t DispersionHistogram::encode(std::span<const int> pattern) const {
  if (pattern.size() != m_) throw Error(ErrorKind::Dimension, "pattern length differs from m");
  std::uint64_t code = 0;
  for (int cls : pattern) {
    if (cls < 1 || static_cast<std::size_t>(cls) > c_) {
      throw Error(ErrorKind::InvalidArgument, "class " + std::to_string(cls) + " outside 1..c");
    }
    code = code * c_ + static_cast<std::uint64_t>(cls - 1);
  }
  return code;
}

std::vector<int> DispersionHistogram::decode(std::uint64_t code) const {
  std::vector<int> out(m_);
  for (std::size_t i = m_; i-- > 0;) {
    out[i] = static_cast<int>(code % c_) + 1;
    code /= c_;
  }
  return out;
}

void DispersionHistogram::add(std::uint64_t code, std::uint64_t count) {
  if (count == 0) return;
  if (code >= alphabet_) throw Error(ErrorKind::InvalidArgument, "pattern code outside alphabet");
  counts_[code] += count;
  total_ += count;
}

void DispersionHistogram::merge(const DispersionHistogram& other) {
  if (other.m_ != m_ || other.c_ != c_) throw Error(ErrorKind::Dimension, "histograms differ in (m, c)");
  for (const auto& [code, n] : other.counts_) add(code, n);
}

std::uint64_t DispersionHistogram::count(std::span<const int> pattern) const {
  const auto it = counts_.find(encode(pattern));
  return it == counts_.end() ? 0 : it->second;
}

std::map<std::vector<int>, std::uint64_t> DispersionHistogram::patterns() const {
  std::map<std::vector<int>, std::uint64_t> out;
  for (const auto& [code, n] : counts_) out.emplace(decode(code), n);
  return out;
}

double DispersionHistogram::normalized_entropy() const {
  if (total_ == 0) throw Error(ErrorKind::EmptyPattern, "entropy of an empty histogram");
  const double total = static_cast<double>(total_);
  double h = 0.0;
  for (const auto& [code, n] : counts_) {
    const double prob = static_cast<double>(n) / total;
    h -= prob * std::log(prob);
  }
  h /= static_cast<double>(m_) * std::log(static_cast<double>(c_));
  return std::clamp(h, 0.0, 1.0);
}

PatternAccumulator::PatternAccumulator(std::uint64_t alphabet_size) {
  if (alphabet_size <= kDenseLimit) dense_.assign(alphabet_size, 0);
}

void PatternAccumulator::flush_into(DispersionHistogram& hist) const {
  if (!dense_.empty()) {
    for (std::uint64_t code = 0; code < dense_.size(); ++code) hist.add(code, dense_[code]);
    return;
  }
  // Sort so the fold order never depends on hash iteration order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items(sparse_.begin(), sparse_.end());
  std::sort(items.begin(), items.end());
  for (const auto& [code, n] : items) hist.add(code, n);
}

}  // namespace mvdeg
