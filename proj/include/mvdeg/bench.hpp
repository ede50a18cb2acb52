#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "mvdeg/entropy.hpp"
#include "mvdeg/graph.hpp"
#include "mvdeg/synth.hpp"

namespace mvdeg {

// --- timing ----------------------------------------------------------------

enum class Method { mvdeg, classical };
std::string to_string(Method m);
Method parse_method(const std::string& s);

enum class Outcome { ok, refused_capacity };
std::string to_string(Outcome o);

struct TimingRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t m = 0;
  std::size_t c = 0;
  double seconds = 0.0;       // median per-call wall time; 0 when refused
  std::string pattern_count;  // decimal; patterns actually processed (or refused)
  std::string graph_bound;    // (N - m) p, reported alongside for reference
  Outcome outcome = Outcome::ok;
  double entropy = 0.0;
};

struct EnvironmentInfo {
  std::string cpu;
  std::string build_flags;
  int threads = 1;
  std::string generator_version;
};

EnvironmentInfo environment_info(int threads);

struct TimingReport {
  std::vector<TimingRecord> records;
  EnvironmentInfo environment;
  std::uint64_t seed = 0;

  /// Records of one method with outcome ok, in sweep order.
  std::vector<TimingRecord> completed(const std::string& method) const;
};

struct TimingOptions {
  std::uint64_t pattern_cap = kDefaultPatternCap;
  std::size_t repetitions = 3;         // median of this many, after one warm-up
  double min_sample_seconds = 0.02;    // each repetition loops the call until this much time passes
  int threads = 1;
  std::string graph = "complete";      // channel graph used by the graph-based method
};

inline const std::vector<std::size_t> kDefaultSweepNs{100, 500, 1000, 2000, 5000, 10000};

/// Times every method at every N on fresh WGN (seed derived from (seed, N)).
/// Classical runs over the cap are recorded as refused; a sweep never aborts.
TimingReport run_timing_sweep(const std::vector<std::size_t>& ns, std::size_t p, std::size_t m, std::size_t c,
                              const std::vector<Method>& methods, std::uint64_t seed,
                              const TimingOptions& options = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

nlohmann::json timing_report_to_json(const TimingReport& r);
void write_timing_csv(const std::filesystem::path& path, const TimingReport& r);

// --- ensembles -------------------------------------------------------------

enum class GraphPolicy { zero, theoretical, estimated, complete };
std::string to_string(GraphPolicy g);
GraphPolicy parse_graph_policy(const std::string& s);

/// Channel graph for one realization: zero, |corr| of the generating matrix
/// (zero for independent generators), |sample corr| of `signal`, or complete.
WeightedGraph graph_for_policy(GraphPolicy policy, const GeneratorSpec& spec, const MultivariateSignal& signal);

struct Condition {
  std::string label;
  GeneratorSpec spec;
};

struct EnsembleReport {
  std::string label;
  std::string graph_policy;
  EmbeddingConfig config;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> realization_seeds;
  std::vector<EntropyCurve> curves;  // one per condition (more for comparisons)

  const EntropyCurve& curve(const std::string& method_label) const;
};

/// Every condition shares the realization seeds realization_seed(seed, r), so
/// conditions are compared on common random numbers. Conditions x realizations
/// run in parallel; results are schedule-independent.
EnsembleReport run_noise_experiment(const std::vector<Condition>& conditions, GraphPolicy policy,
                                    const EmbeddingConfig& cfg, std::size_t realizations, std::uint64_t seed,
                                    Execution exec = Execution::parallel);

/// mvDEG under two graph policies on the same realizations. Emits
/// "<label>/<a>", "<label>/<b>" and "<label>/abs_diff" curves, the last being
/// the per-scale mean (and SD) of |H_a - H_b|.
EnsembleReport compare_graph_policies(const std::vector<Condition>& conditions, const EmbeddingConfig& cfg,
                                      std::size_t realizations, std::uint64_t seed,
                                      GraphPolicy a = GraphPolicy::theoretical, GraphPolicy b = GraphPolicy::estimated,
                                      Execution exec = Execution::parallel);

/// F(0)..F(3) trivariate WGN / 1/f mixtures.
std::vector<Condition> mixture_conditions(std::size_t n);
/// Uniform off-diagonal correlation for each degree.
std::vector<Condition> correlation_degree_conditions(std::size_t p, std::size_t n,
                                                     const std::vector<double>& degrees = {0.95, 0.75, 0.55, 0.35, 0.15});
/// Five block structures on four channels with in-block correlation rho:
/// independent, one pair, two pairs, triple + singleton, all four.
std::vector<Condition> correlated_structure_conditions(std::size_t n, double rho = 0.9);

nlohmann::json ensemble_report_to_json(const EnsembleReport& r);

}  // namespace mvdeg
