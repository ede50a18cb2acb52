#include "mvdeg/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

#include "mvdeg/error.hpp"
#include "mvdeg/io.hpp"
#include "mvdeg/rng.hpp"

#ifndef MVDEG_BUILD_FLAGS
#define MVDEG_BUILD_FLAGS "unknown"
#endif

namespace mvdeg {

std::string to_string(Method m) { return m == Method::mvdeg ? "mvdeg" : "classical"; }

Method parse_method(const std::string& s) {
  if (s == "mvdeg") return Method::mvdeg;
  if (s == "classical" || s == "mvde") return Method::classical;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "' (expected mvdeg or classical)");
}

std::string to_string(Outcome o) { return o == Outcome::ok ? "ok" : "refused-capacity"; }

std::string to_string(GraphPolicy g) {
  switch (g) {
    case GraphPolicy::zero: return "zero";
    case GraphPolicy::theoretical: return "theoretical";
    case GraphPolicy::estimated: return "estimated";
    case GraphPolicy::complete: return "complete";
  }
  return "?";
}

GraphPolicy parse_graph_policy(const std::string& s) {
  if (s == "zero") return GraphPolicy::zero;
  if (s == "theoretical") return GraphPolicy::theoretical;
  if (s == "estimated") return GraphPolicy::estimated;
  if (s == "complete") return GraphPolicy::complete;
  throw Error(ErrorKind::InvalidArgument, "unknown graph policy '" + s + "'");
}

EnvironmentInfo environment_info(int threads) {
  EnvironmentInfo env;
  env.cpu = "unknown";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) env.cpu = line.substr(colon + 2);
      break;
    }
  }
  env.build_flags = MVDEG_BUILD_FLAGS;
  env.threads = threads;
  env.generator_version = kGeneratorVersion;
  return env;
}

std::vector<TimingRecord> TimingReport::completed(const std::string& method) const {
  std::vector<TimingRecord> out;
  for (const auto& r : records) {
    if (r.method == method && r.outcome == Outcome::ok) out.push_back(r);
  }
  return out;
}

namespace {

// Median over `reps` samples of the per-call wall time, after one warm-up.
double time_call(const std::function<void()>& call, std::size_t reps, double min_seconds) {
  using clock = std::chrono::steady_clock;
  call();
  std::vector<double> samples;
  for (std::size_t r = 0; r < std::max<std::size_t>(reps, 1); ++r) {
    std::size_t iterations = 0;
    const auto start = clock::now();
    double elapsed = 0.0;
    do {
      call();
      ++iterations;
      elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < min_seconds);
    samples.push_back(elapsed / static_cast<double>(iterations));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

}  // namespace

TimingReport run_timing_sweep(const std::vector<std::size_t>& ns, std::size_t p, std::size_t m, std::size_t c,
                              const std::vector<Method>& methods, std::uint64_t seed, const TimingOptions& options) {
  if (ns.empty()) throw Error(ErrorKind::InvalidArgument, "timing sweep needs at least one N");
  if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "timing sweep needs at least one method");
  if (options.graph != "complete" && options.graph != "zero") {
    throw Error(ErrorKind::InvalidArgument, "timing graph must be complete or zero");
  }

  const int saved_threads = omp_get_max_threads();
  set_threads(options.threads);
  const Execution exec = options.threads > 1 ? Execution::parallel : Execution::serial;

  TimingReport report;
  report.seed = seed;
  report.environment = environment_info(options.threads);
  const WeightedGraph graph = options.graph == "zero" ? build_zero_graph(p) : build_complete_graph(p);

  for (std::size_t n : ns) {
    const MultivariateSignal signal = gen_wgn(p, n, derive_seed(seed, n));
    const PatternCounts counts = pattern_counts(n, p, m);
    for (Method method : methods) {
      TimingRecord rec{to_string(method), n, p, m, c, 0.0, "", counts.graph_bound.str(), Outcome::ok, 0.0};
      if (method == Method::mvdeg) {
        ScaleResult last = mvdeg_single_scale(signal, graph, m, c, exec);
        rec.pattern_count = std::to_string(last.histogram.total());
        rec.entropy = last.entropy;
        rec.seconds = time_call([&] { last = mvdeg_single_scale(signal, graph, m, c, exec); }, options.repetitions,
                                options.min_sample_seconds);
      } else {
        rec.pattern_count = counts.classical.str();
        if (counts.classical > BigInt(options.pattern_cap)) {
          rec.outcome = Outcome::refused_capacity;
        } else {
          double h = 0.0;
          rec.seconds = time_call([&] { h = classical_mvde(signal, m, c, 1, options.pattern_cap, exec); },
                                  options.repetitions, options.min_sample_seconds);
          rec.entropy = h;
        }
      }
      report.records.push_back(std::move(rec));
    }
  }
  set_threads(saved_threads);
  return report;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "log-log fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::InvalidArgument, "slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

nlohmann::json timing_report_to_json(const TimingReport& r) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& t : r.records) {
    nlohmann::json j{{"method", t.method},
                     {"N", t.n},
                     {"p", t.p},
                     {"m", t.m},
                     {"c", t.c},
                     {"outcome", to_string(t.outcome)},
                     {"pattern_count", t.pattern_count},
                     {"graph_bound", t.graph_bound}};
    if (t.outcome == Outcome::ok) {
      j["seconds"] = t.seconds;
      j["entropy"] = t.entropy;
    } else {
      j["seconds"] = nullptr;
    }
    recs.push_back(std::move(j));
  }
  return {{"seed", r.seed},
          {"environment",
           {{"cpu", r.environment.cpu},
            {"build_flags", r.environment.build_flags},
            {"threads", r.environment.threads},
            {"generator_version", r.environment.generator_version}}},
          {"records", recs}};
}

void write_timing_csv(const std::filesystem::path& path, const TimingReport& r) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  f << "method,N,p,m,c,outcome,seconds,pattern_count,graph_bound\n";
  for (const auto& t : r.records) {
    f << t.method << ',' << t.n << ',' << t.p << ',' << t.m << ',' << t.c << ',' << to_string(t.outcome) << ','
      << (t.outcome == Outcome::ok ? io::format_double(t.seconds) : std::string{}) << ',' << t.pattern_count << ','
      << t.graph_bound << '\n';
  }
}

// --- ensembles -------------------------------------------------------------

WeightedGraph graph_for_policy(GraphPolicy policy, const GeneratorSpec& spec, const MultivariateSignal& signal) {
  const std::size_t p = signal.channels();
  switch (policy) {
    case GraphPolicy::zero: return build_zero_graph(p);
    case GraphPolicy::complete: return build_complete_graph(p);
    case GraphPolicy::estimated: return estimate_correlation_graph(signal);
    case GraphPolicy::theoretical:
      if (spec.kind == GeneratorKind::correlated) return correlation_matrix_graph(spec.corr);
      return build_zero_graph(p).with_descriptor("correlation-theoretical(" + std::to_string(p) + ")");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown graph policy");
}

const EntropyCurve& EnsembleReport::curve(const std::string& method_label) const {
  for (const auto& c : curves) {
    if (c.method == method_label) return c;
  }
  throw Error(ErrorKind::InvalidArgument, "report has no curve '" + method_label + "'");
}

namespace {

void check_ensemble_args(const std::vector<Condition>& conditions, const EmbeddingConfig& cfg,
                         std::size_t realizations) {
  cfg.validate();
  if (conditions.empty()) throw Error(ErrorKind::InvalidArgument, "experiment needs at least one condition");
  if (realizations < 2) throw Error(ErrorKind::InvalidArgument, "experiment needs at least 2 realizations");
  for (const auto& c : conditions) c.spec.validate();
}

// Runs task(condition, realization) for all pairs; results land at index
// condition * realizations + r regardless of scheduling.
template <typename Result, typename Task>
std::vector<Result> run_grid(std::size_t conditions, std::size_t realizations, Execution exec, Task task) {
  const auto total = static_cast<long long>(conditions * realizations);
  std::vector<Result> out(static_cast<std::size_t>(total));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long long i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = task(idx / realizations, idx % realizations);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

MultivariateSignal realization_signal(const GeneratorSpec& spec, std::uint64_t seed, std::size_t r) {
  GeneratorSpec s = spec;
  s.seed = realization_seed(seed, r);
  return generate(s);
}

std::vector<std::uint64_t> realization_seeds(std::uint64_t seed, std::size_t n) {
  std::vector<std::uint64_t> out;
  for (std::size_t r = 0; r < n; ++r) out.push_back(realization_seed(seed, r));
  return out;
}

}  // namespace

EnsembleReport run_noise_experiment(const std::vector<Condition>& conditions, GraphPolicy policy,
                                    const EmbeddingConfig& cfg, std::size_t realizations, std::uint64_t seed,
                                    Execution exec) {
  check_ensemble_args(conditions, cfg, realizations);
  struct Cell {
    RealizationCurve curve;
    std::string graph;
  };
  auto cells = run_grid<Cell>(conditions.size(), realizations, exec, [&](std::size_t ci, std::size_t r) {
    const auto signal = realization_signal(conditions[ci].spec, seed, r);
    const auto graph = graph_for_policy(policy, conditions[ci].spec, signal);
    return Cell{mvdeg_scales(signal, graph, cfg, Execution::serial), graph.descriptor()};
  });

  EnsembleReport report{"noise", to_string(policy), cfg, realizations, seed, realization_seeds(seed, realizations), {}};
  for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
    std::vector<RealizationCurve> per;
    for (std::size_t r = 0; r < realizations; ++r) per.push_back(cells[ci * realizations + r].curve);
    EntropyCurve curve = summarize(conditions[ci].label, cfg, cells[ci * realizations].graph, per);
    curve.seed = seed;
    report.curves.push_back(std::move(curve));
  }
  return report;
}

EnsembleReport compare_graph_policies(const std::vector<Condition>& conditions, const EmbeddingConfig& cfg,
                                      std::size_t realizations, std::uint64_t seed, GraphPolicy a, GraphPolicy b,
                                      Execution exec) {
  check_ensemble_args(conditions, cfg, realizations);
  struct Cell {
    RealizationCurve first;
    RealizationCurve second;
    RealizationCurve diff;
  };
  auto cells = run_grid<Cell>(conditions.size(), realizations, exec, [&](std::size_t ci, std::size_t r) {
    const auto& spec = conditions[ci].spec;
    const auto signal = realization_signal(spec, seed, r);
    Cell cell;
    cell.first = mvdeg_scales(signal, graph_for_policy(a, spec, signal), cfg, Execution::serial);
    cell.second = mvdeg_scales(signal, graph_for_policy(b, spec, signal), cfg, Execution::serial);
    for (std::size_t s = 0; s < cfg.max_scale; ++s) {
      if (cell.first.values[s] && cell.second.values[s]) {
        cell.diff.values.push_back(std::abs(*cell.first.values[s] - *cell.second.values[s]));
        cell.diff.notes.emplace_back();
      } else {
        cell.diff.values.push_back(std::nullopt);
        cell.diff.notes.emplace_back("undefined under one policy");
      }
    }
    return cell;
  });

  EnsembleReport report{"graph-policy-comparison", to_string(a) + " vs " + to_string(b), cfg, realizations, seed,
                        realization_seeds(seed, realizations), {}};
  for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
    std::vector<RealizationCurve> first, second, diff;
    for (std::size_t r = 0; r < realizations; ++r) {
      const auto& cell = cells[ci * realizations + r];
      first.push_back(cell.first);
      second.push_back(cell.second);
      diff.push_back(cell.diff);
    }
    const std::string& label = conditions[ci].label;
    for (auto [suffix, data, graph] : {std::tuple{to_string(a), &first, to_string(a)},
                                       std::tuple{to_string(b), &second, to_string(b)},
                                       std::tuple{std::string("abs_diff"), &diff, to_string(a) + "|" + to_string(b)}}) {
      EntropyCurve curve = summarize(label + "/" + suffix, cfg, graph, *data);
      curve.seed = seed;
      report.curves.push_back(std::move(curve));
    }
  }
  return report;
}

std::vector<Condition> mixture_conditions(std::size_t n) {
  std::vector<Condition> out;
  for (std::size_t q = 0; q <= 3; ++q) {
    GeneratorSpec s;
    s.kind = GeneratorKind::mixture;
    s.p = 3;
    s.n = n;
    s.q = q;
    out.push_back({"F(" + std::to_string(q) + ")", s});
  }
  return out;
}

std::vector<Condition> correlation_degree_conditions(std::size_t p, std::size_t n, const std::vector<double>& degrees) {
  std::vector<Condition> out;
  for (double rho : degrees) {
    GeneratorSpec s;
    s.kind = GeneratorKind::correlated;
    s.p = p;
    s.n = n;
    s.corr = uniform_correlation(p, rho);
    out.push_back({"rho=" + io::format_double(rho), s});
  }
  return out;
}

std::vector<Condition> correlated_structure_conditions(std::size_t n, double rho) {
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> sets{
      {"independent", {1, 1, 1, 1}},
      {"one-pair", {2, 1, 1}},
      {"two-pairs", {2, 2}},
      {"triple+single", {3, 1}},
      {"all-four", {4}},
  };
  std::vector<Condition> out;
  for (const auto& [label, blocks] : sets) {
    GeneratorSpec s;
    s.kind = GeneratorKind::correlated;
    s.p = 4;
    s.n = n;
    s.corr = block_correlation(blocks, rho);
    out.push_back({label, s});
  }
  return out;
}

nlohmann::json ensemble_report_to_json(const EnsembleReport& r) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : r.curves) curves.push_back(io::curve_to_json(c));
  return {{"label", r.label},
          {"graph_policy", r.graph_policy},
          {"m", r.config.m},
          {"c", r.config.c},
          {"max_scale", r.config.max_scale},
          {"realizations", r.realizations},
          {"seed", r.seed},
          {"realization_seeds", r.realization_seeds},
          {"generator_version", kGeneratorVersion},
          {"curves", curves}};
}

}  // namespace mvdeg
