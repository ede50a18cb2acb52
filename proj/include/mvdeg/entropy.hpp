#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvdeg/graph.hpp"
#include "mvdeg/histogram.hpp"
#include "mvdeg/parallel.hpp"
#include "mvdeg/signal.hpp"

namespace mvdeg {

using BigInt = boost::multiprecision::cpp_int;

struct EmbeddingConfig {
  std::size_t m = 4;          // embedding dimension, >= 2
  std::size_t c = 6;          // class count, >= 2
  std::size_t max_scale = 1;  // largest coarse-graining factor, >= 1

  void validate() const;
};

/// Default refusal threshold for the classical baseline.
inline constexpr std::uint64_t kDefaultPatternCap = 100'000'000;

// --- coarse-graining and class mapping -----------------------------------

/// Non-overlapping window means of length tau; trailing remainder dropped.
std::vector<double> coarse_grain_series(std::span<const double> x, std::size_t tau);
MultivariateSignal coarse_grain(const MultivariateSignal& signal, std::size_t tau);

double sample_mean(std::span<const double> x);
/// Denominator N-1; exactly 0 for constant input.
double sample_sd(std::span<const double> x);

/// round(c * Phi((x - mu) / sd) + 0.5) clamped to [1, c], half away from zero.
/// sd == 0 maps everything to round(c/2 + 0.5).
int ncdf_class(double x, double mu, double sd, std::size_t c) noexcept;

/// Class matrix, sample-major like MultivariateSignal (entry (t, ch) at t*p + ch).
struct ClassMatrix {
  std::size_t channels = 0;
  std::size_t samples = 0;
  std::vector<int> classes;

  int at(std::size_t ch, std::size_t t) const noexcept { return classes[t * channels + ch]; }
};

ClassMatrix ncdf_map(const MultivariateSignal& signal, std::size_t c);

// --- graph-based multivariate dispersion entropy ---------------------------

struct ScaleResult {
  double entropy;
  DispersionHistogram histogram;
};

/// One scale of the graph-based method on an already coarse-grained signal.
ScaleResult mvdeg_single_scale(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t m,
                               std::size_t c, Execution exec = Execution::parallel);

struct ScaleRecord {
  std::size_t tau = 0;
  bool defined = false;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t realizations = 0;
  std::string note;  // reason when undefined
};

struct EntropyCurve {
  std::string method;
  std::size_t m = 0;
  std::size_t c = 0;
  std::string graph;
  std::optional<std::uint64_t> seed;
  std::vector<ScaleRecord> records;

  const ScaleRecord& at_scale(std::size_t tau) const;
};

/// Per-scale values for one realization; nullopt marks an undefined scale.
struct RealizationCurve {
  std::vector<std::optional<double>> values;  // index tau-1
  std::vector<std::string> notes;
};

RealizationCurve mvdeg_scales(const MultivariateSignal& signal, const WeightedGraph& channel_graph,
                              const EmbeddingConfig& cfg, Execution exec = Execution::parallel);

EntropyCurve mvdeg_curve(const MultivariateSignal& signal, const WeightedGraph& channel_graph,
                         const EmbeddingConfig& cfg, Execution exec = Execution::parallel);

/// Mean and sample SD across realizations. A scale is defined only when every
/// realization is defined there; a single realization has SD 0.
EntropyCurve summarize(std::string method, const EmbeddingConfig& cfg, std::string graph,
                       const std::vector<RealizationCurve>& realizations);

// --- baselines -------------------------------------------------------------

/// Classical multivariate dispersion entropy at one scale: all m-subsets of the
/// mp-vector of classes at every start index. Throws CapacityError when the
/// pattern count exceeds `pattern_cap`.
ScaleResult classical_mvde_scale(const MultivariateSignal& signal, std::size_t m, std::size_t c, std::size_t tau,
                                 std::uint64_t pattern_cap = kDefaultPatternCap,
                                 Execution exec = Execution::parallel);

double classical_mvde(const MultivariateSignal& signal, std::size_t m, std::size_t c, std::size_t tau,
                      std::uint64_t pattern_cap = kDefaultPatternCap, Execution exec = Execution::parallel);

EntropyCurve classical_mvde_curve(const MultivariateSignal& signal, const EmbeddingConfig& cfg,
                                  std::uint64_t pattern_cap = kDefaultPatternCap,
                                  Execution exec = Execution::parallel);

/// Univariate dispersion entropy on an already coarse-grained series.
ScaleResult univariate_de_scale(std::span<const double> series, std::size_t m, std::size_t c);

RealizationCurve univariate_mde_scales(std::span<const double> series, const EmbeddingConfig& cfg);
EntropyCurve univariate_mde(std::span<const double> series, const EmbeddingConfig& cfg);

// --- pattern counts --------------------------------------------------------

BigInt binomial(std::size_t n, std::size_t k);

struct PatternCounts {
  BigInt classical;    // (N - m + 1) * C(m p, m)
  BigInt graph_bound;  // (N - m) * p
};

PatternCounts pattern_counts(std::size_t n, std::size_t p, std::size_t m);

}  // namespace mvdeg
