#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

namespace mvdeg {

/// Counts of length-m class patterns over the alphabet {1..c}.
///
/// Patterns are keyed by their base-c code: sum_i (class_i - 1) * c^(m-1-i).
/// Only positive counts are stored.
class DispersionHistogram {
 public:
  DispersionHistogram(std::size_t m, std::size_t c);

  std::size_t m() const noexcept { return m_; }
  std::size_t c() const noexcept { return c_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t distinct() const noexcept { return counts_.size(); }
  /// c^m.
  std::uint64_t alphabet_size() const noexcept { return alphabet_; }

  std::uint64_t encode(std::span<const int> pattern) const;
  std::vector<int> decode(std::uint64_t code) const;

  void add(std::uint64_t code, std::uint64_t count = 1);
  void add_pattern(std::span<const int> pattern, std::uint64_t count = 1) { add(encode(pattern), count); }
  void merge(const DispersionHistogram& other);

  std::uint64_t count(std::span<const int> pattern) const;
  const std::map<std::uint64_t, std::uint64_t>& codes() const noexcept { return counts_; }
  /// Decoded pattern -> count.
  std::map<std::vector<int>, std::uint64_t> patterns() const;

  /// -(1 / ln c^m) * sum p ln p, clamped to [0, 1].
  double normalized_entropy() const;

  friend bool operator==(const DispersionHistogram&, const DispersionHistogram&) = default;

 private:
  std::size_t m_;
  std::size_t c_;
  std::uint64_t alphabet_;
  std::uint64_t total_ = 0;
  std::map<std::uint64_t, std::uint64_t> counts_;
};

/// Hot-loop counter: flat array for small alphabets, hash map otherwise.
/// One per thread; folded into a DispersionHistogram at the end.
class PatternAccumulator {
 public:
  explicit PatternAccumulator(std::uint64_t alphabet_size);
  void add(std::uint64_t code) {
    if (dense_.empty()) {
      ++sparse_[code];
    } else {
      ++dense_[code];
    }
  }
  void flush_into(DispersionHistogram& hist) const;

  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

 private:
  std::vector<std::uint64_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

}  // namespace mvdeg
