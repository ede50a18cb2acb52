#include "mvdeg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <ostream>
#include <sstream>

#include "mvdeg/bench.hpp"
#include "mvdeg/entropy.hpp"
#include "mvdeg/error.hpp"
#include "mvdeg/graph.hpp"
#include "mvdeg/io.hpp"
#include "mvdeg/rng.hpp"
#include "mvdeg/synth.hpp"

namespace mvdeg::cli {

namespace {

struct GenerateArgs {
  std::string kind = "wgn";
  std::size_t p = 3;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t q = 0;
  std::string corr;
  std::string out;
};

struct GraphSource {
  std::string kind = "zero";  // zero | complete | correlation | gaussian | file
  std::string file;
  std::string coords;
  double sigma1_sq = 0.0;
  double sigma2 = 0.0;
  bool self_loops = false;
};

struct GraphArgs {
  GraphSource source;
  std::size_t p = 0;
  std::string signal;
  std::string out;
};

struct EntropyArgs {
  std::string signal;
  std::string method = "mvdeg";
  GraphSource graph;
  EmbeddingConfig cfg{4, 6, 1};
  std::size_t channel = 1;
  std::uint64_t cap = kDefaultPatternCap;
  int threads = 0;
  std::string out;
};

struct BenchArgs {
  std::string ns = "100,500,1000,2000,5000,10000";
  std::size_t p = 10;
  std::size_t m = 4;
  std::size_t c = 6;
  std::string methods = "mvdeg,classical";
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultPatternCap;
  std::size_t reps = 3;
  double min_sample = 0.02;
  int threads = 1;
  std::string graph = "complete";
  std::string out;
};

struct EnsembleArgs {
  std::string config;
  std::string preset;
  std::size_t realizations = 40;
  std::size_t n = 15000;
  std::size_t p = 3;
  EmbeddingConfig cfg{4, 6, 20};
  std::string policy = "zero";
  std::uint64_t seed = 1;
  double rho = 0.9;
  int threads = 0;
  std::string out;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw Error(ErrorKind::InvalidArgument, "not a positive integer: '" + s + "'");
  return static_cast<std::size_t>(v);
}

void add_graph_options(CLI::App* cmd, GraphSource& g, const std::string& kind_flag) {
  cmd->add_option(kind_flag, g.kind, "Graph: zero | complete | correlation | gaussian | file")
      ->check(CLI::IsMember({"zero", "complete", "correlation", "gaussian", "file"}));
  cmd->add_option("--graph-file", g.file, "Graph JSON (with --graph file)");
  cmd->add_option("--coords", g.coords, "Station layout CSV (station_id,x,y) for the gaussian graph");
  cmd->add_option("--sigma1-sq", g.sigma1_sq, "Gaussian kernel width sigma1^2");
  cmd->add_option("--sigma2", g.sigma2, "Gaussian kernel distance threshold");
  cmd->add_flag("--self-loops", g.self_loops, "Keep unit self-weights in the gaussian graph");
}

WeightedGraph resolve_graph(const GraphSource& g, std::size_t p, const MultivariateSignal* signal) {
  if (g.kind == "zero") return build_zero_graph(p);
  if (g.kind == "complete") return build_complete_graph(p);
  if (g.kind == "correlation") {
    if (!signal) throw Error(ErrorKind::InvalidArgument, "correlation graph needs a signal (--signal)");
    return estimate_correlation_graph(*signal);
  }
  if (g.kind == "gaussian") {
    if (g.coords.empty()) throw Error(ErrorKind::InvalidArgument, "gaussian graph needs --coords");
    if (!(g.sigma1_sq > 0.0) || !(g.sigma2 > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "gaussian graph needs --sigma1-sq > 0 and --sigma2 > 0");
    }
    return build_gaussian_kernel_graph(io::read_station_csv(g.coords), g.sigma1_sq, g.sigma2, g.self_loops);
  }
  if (g.file.empty()) throw Error(ErrorKind::InvalidArgument, "--graph file needs --graph-file");
  return io::read_graph_json(g.file);
}

nlohmann::json graph_source_json(const GraphSource& g) {
  nlohmann::json j{{"kind", g.kind}};
  if (g.kind == "file") j["file"] = g.file;
  if (g.kind == "gaussian") {
    j["coords"] = g.coords;
    j["sigma1_sq"] = g.sigma1_sq;
    j["sigma2"] = g.sigma2;
    j["self_loops"] = g.self_loops;
  }
  return j;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(a.kind);
  spec.p = a.p;
  spec.n = a.n;
  spec.seed = a.seed;
  spec.q = a.q;
  if (spec.kind == GeneratorKind::correlated) {
    if (a.corr.empty()) throw Error(ErrorKind::InvalidArgument, "--kind correlated needs --corr");
    spec.corr = io::read_correlation_json(a.corr);
    spec.p = static_cast<std::size_t>(spec.corr.rows());
    check_correlation_matrix(spec.corr);
    psd_cholesky(spec.corr);
  }
  const MultivariateSignal signal = generate(spec);
  io::write_signal_csv(a.out, signal);
  io::write_json(a.out + ".spec.json", io::generator_spec_to_json(spec));
  out << "wrote " << a.out << " (" << signal.samples() << " rows x " << signal.channels() << " channels)\n";
  return 0;
}

int cmd_graph(const GraphArgs& a, std::ostream& out) {
  std::optional<MultivariateSignal> signal;
  if (!a.signal.empty()) signal = io::read_signal_csv(a.signal);
  std::size_t p = a.p;
  if (signal) {
    if (p != 0 && p != signal->channels()) throw Error(ErrorKind::Dimension, "--p differs from the signal's channel count");
    p = signal->channels();
  }
  if (p == 0 && (a.source.kind == "zero" || a.source.kind == "complete")) {
    throw Error(ErrorKind::InvalidArgument, "--p (or --signal) is required for zero/complete graphs");
  }
  const WeightedGraph g = resolve_graph(a.source, p, signal ? &*signal : nullptr);
  io::write_graph_json(a.out, g);
  out << "wrote " << a.out << " (" << g.descriptor() << ", " << g.edge_count() << " positive weights)\n";
  return 0;
}

int cmd_entropy(const EntropyArgs& a, std::ostream& out) {
  a.cfg.validate();
  if (a.threads > 0) set_threads(a.threads);
  const MultivariateSignal signal = io::read_signal_csv(a.signal);

  EntropyCurve curve;
  if (a.method == "mvdeg") {
    const WeightedGraph g = resolve_graph(a.graph, signal.channels(), &signal);
    if (g.size() != signal.channels()) {
      throw Error(ErrorKind::Dimension, "graph has " + std::to_string(g.size()) + " vertices but the signal has " +
                                            std::to_string(signal.channels()) + " channels");
    }
    curve = mvdeg_curve(signal, g, a.cfg);
  } else if (a.method == "mvde") {
    curve = classical_mvde_curve(signal, a.cfg, a.cap);
  } else {
    if (a.channel < 1 || a.channel > signal.channels()) {
      throw Error(ErrorKind::Dimension, "--channel must be in 1.." + std::to_string(signal.channels()));
    }
    const auto x = signal.channel(a.channel - 1);
    curve = univariate_mde(x, a.cfg);
  }

  io::write_curves_csv(a.out + ".csv", {curve});
  nlohmann::json j = io::curve_to_json(curve);
  j["config"] = {{"command", "entropy"},
                 {"signal", a.signal},
                 {"method", a.method},
                 {"graph", graph_source_json(a.graph)},
                 {"m", a.cfg.m},
                 {"c", a.cfg.c},
                 {"max_scale", a.cfg.max_scale},
                 {"channel", a.channel},
                 {"pattern_cap", a.cap},
                 {"threads", max_threads()},
                 {"p", signal.channels()},
                 {"N", signal.samples()}};
  io::write_json(a.out + ".json", j);

  std::size_t undefined = 0;
  for (const auto& r : curve.records) undefined += r.defined ? 0 : 1;
  out << "wrote " << a.out << ".csv and " << a.out << ".json";
  if (undefined) out << " (" << undefined << " undefined scale(s))";
  out << '\n';
  return 0;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<std::size_t> ns;
  for (const auto& s : split_list(a.ns)) ns.push_back(parse_size(s));
  if (ns.empty()) throw Error(ErrorKind::InvalidArgument, "--N list is empty");
  std::vector<Method> methods;
  for (const auto& s : split_list(a.methods)) methods.push_back(parse_method(s));
  if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "--methods list is empty");

  TimingOptions opt;
  opt.pattern_cap = a.cap;
  opt.repetitions = a.reps;
  opt.min_sample_seconds = a.min_sample;
  opt.threads = a.threads;
  opt.graph = a.graph;
  const TimingReport report = run_timing_sweep(ns, a.p, a.m, a.c, methods, a.seed, opt);

  nlohmann::json j = timing_report_to_json(report);
  j["config"] = {{"command", "bench"}, {"N", ns},           {"p", a.p},         {"m", a.m},
                 {"c", a.c},           {"methods", a.methods}, {"pattern_cap", a.cap}, {"repetitions", a.reps},
                 {"graph", a.graph}};
  io::write_json(a.out + ".json", j);
  write_timing_csv(a.out + ".csv", report);

  for (const auto& r : report.records) {
    out << r.method << " N=" << r.n << " p=" << r.p << " m=" << r.m << ": " << to_string(r.outcome);
    if (r.outcome == Outcome::ok) out << " " << r.seconds * 1e3 << " ms";
    out << " patterns=" << r.pattern_count << '\n';
  }
  const auto done = report.completed("mvdeg");
  if (done.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& r : done) {
      x.push_back(static_cast<double>(r.n));
      y.push_back(r.seconds);
    }
    out << "mvdeg log-log slope: " << loglog_slope(x, y) << '\n';
  }
  return 0;
}

std::vector<Condition> conditions_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_array() || j.empty()) throw ParseError(source, 1, 0, "'conditions' must be a nonempty array");
  std::vector<Condition> out;
  for (const auto& c : j) {
    Condition cond;
    cond.label = c.value("label", std::string("condition") + std::to_string(out.size() + 1));
    cond.spec.kind = parse_generator_kind(c.value("kind", std::string("wgn")));
    cond.spec.p = c.value("p", std::size_t{3});
    cond.spec.n = c.value("n", std::size_t{1000});
    cond.spec.q = c.value("q", std::size_t{0});
    if (c.contains("corr")) {
      cond.spec.corr = io::matrix_from_json(c["corr"], source);
      cond.spec.p = static_cast<std::size_t>(cond.spec.corr.rows());
    } else if (c.contains("blocks")) {
      cond.spec.corr = block_correlation(c["blocks"].get<std::vector<std::size_t>>(), c.value("rho", 0.9));
      cond.spec.p = static_cast<std::size_t>(cond.spec.corr.rows());
    } else if (c.contains("rho")) {
      cond.spec.corr = uniform_correlation(cond.spec.p, c["rho"].get<double>());
    }
    out.push_back(std::move(cond));
  }
  return out;
}

int cmd_ensemble(EnsembleArgs a, std::ostream& out) {
  if (a.threads > 0) set_threads(a.threads);
  std::vector<Condition> conditions;
  std::string experiment = "noise";
  if (!a.config.empty()) {
    const auto j = io::read_json(a.config);
    try {
      experiment = j.value("experiment", std::string("noise"));
      a.policy = j.value("graph_policy", a.policy);
      a.cfg.m = j.value("m", a.cfg.m);
      a.cfg.c = j.value("c", a.cfg.c);
      a.cfg.max_scale = j.value("max_scale", a.cfg.max_scale);
      a.realizations = j.value("realizations", a.realizations);
      a.seed = j.value("seed", a.seed);
      if (!j.contains("conditions")) throw ParseError(a.config, 1, 0, "experiment config needs 'conditions'");
      conditions = conditions_from_json(j["conditions"], a.config);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(a.config, 1, 0, std::string("bad experiment config: ") + e.what());
    }
  } else if (a.preset == "mixture") {
    conditions = mixture_conditions(a.n);
  } else if (a.preset == "correlation-degree") {
    conditions = correlation_degree_conditions(a.p, a.n);
  } else if (a.preset == "correlated-sets" || a.preset == "graph-policies") {
    conditions = correlated_structure_conditions(a.n, a.rho);
    if (a.preset == "graph-policies") experiment = "compare";
  } else {
    throw Error(ErrorKind::InvalidArgument, "ensemble needs --config or --preset");
  }

  EnsembleReport report = experiment == "compare"
                              ? compare_graph_policies(conditions, a.cfg, a.realizations, a.seed)
                              : run_noise_experiment(conditions, parse_graph_policy(a.policy), a.cfg, a.realizations,
                                                     a.seed);
  nlohmann::json j = ensemble_report_to_json(report);
  j["config"] = {{"command", "ensemble"}, {"preset", a.preset}, {"config_file", a.config},
                 {"experiment", experiment}, {"threads", max_threads()}};
  io::write_json(a.out + ".json", j);
  io::write_curves_csv(a.out + ".csv", report.curves);
  out << "wrote " << a.out << ".csv and " << a.out << ".json (" << report.curves.size() << " curves, "
      << report.realizations << " realizations)\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-based multivariate multiscale dispersion entropy"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic signal CSV plus a JSON spec sidecar");
  generate->add_option("--kind", gen.kind, "wgn | one_over_f | correlated | mixture")
      ->check(CLI::IsMember({"wgn", "one_over_f", "correlated", "mixture"}));
  generate->add_option("--p", gen.p, "Channel count");
  generate->add_option("--n", gen.n, "Samples per channel");
  generate->add_option("--seed", gen.seed, "64-bit seed");
  generate->add_option("--q", gen.q, "Mixture: number of WGN channels (0..3)");
  generate->add_option("--corr", gen.corr, "Correlation matrix JSON (correlated kind)");
  generate->add_option("--out", gen.out, "Output CSV path")->required();

  GraphArgs gr;
  auto* graph = app.add_subcommand("graph", "Build a channel graph and write it as JSON");
  add_graph_options(graph, gr.source, "--kind");
  graph->add_option("--p", gr.p, "Vertex count (zero/complete)");
  graph->add_option("--signal", gr.signal, "Signal CSV (correlation graph)");
  graph->add_option("--out", gr.out, "Output JSON path")->required();

  EntropyArgs ent;
  auto* entropy = app.add_subcommand("entropy", "Entropy-vs-scale curve of a signal CSV");
  entropy->add_option("--signal", ent.signal, "Signal CSV")->required();
  entropy->add_option("--method", ent.method, "mvdeg | mvde | mde")->check(CLI::IsMember({"mvdeg", "mvde", "mde"}));
  add_graph_options(entropy, ent.graph, "--graph");
  entropy->add_option("--m", ent.cfg.m, "Embedding dimension");
  entropy->add_option("--c", ent.cfg.c, "Class count");
  entropy->add_option("--max-scale", ent.cfg.max_scale, "Largest scale factor");
  entropy->add_option("--channel", ent.channel, "Channel (1-based) for --method mde");
  entropy->add_option("--cap", ent.cap, "Pattern cap for --method mvde");
  entropy->add_option("--threads", ent.threads, "OpenMP threads (0 = runtime default)");
  entropy->add_option("--out", ent.out, "Output prefix (writes .csv and .json)")->required();

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Timing sweep of mvDEG against classical mvDE");
  bench->add_option("--N", bn.ns, "Comma-separated sample counts");
  bench->add_option("--p", bn.p, "Channel count");
  bench->add_option("--m", bn.m, "Embedding dimension");
  bench->add_option("--c", bn.c, "Class count");
  bench->add_option("--methods", bn.methods, "Comma-separated: mvdeg, classical");
  bench->add_option("--seed", bn.seed, "64-bit seed");
  bench->add_option("--cap", bn.cap, "Classical pattern cap");
  bench->add_option("--reps", bn.reps, "Timed repetitions (median reported)");
  bench->add_option("--min-sample", bn.min_sample, "Minimum seconds per repetition");
  bench->add_option("--threads", bn.threads, "Threads for timed kernels");
  bench->add_option("--graph", bn.graph, "complete | zero")->check(CLI::IsMember({"complete", "zero"}));
  bench->add_option("--out", bn.out, "Output prefix (writes .csv and .json)")->required();

  EnsembleArgs en;
  auto* ensemble = app.add_subcommand("ensemble", "Seeded multi-realization noise experiments");
  ensemble->add_option("--config", en.config, "Experiment config JSON");
  ensemble->add_option("--preset", en.preset, "mixture | correlation-degree | correlated-sets | graph-policies")
      ->check(CLI::IsMember({"mixture", "correlation-degree", "correlated-sets", "graph-policies"}));
  ensemble->add_option("--realizations", en.realizations, "Realizations per condition");
  ensemble->add_option("--n", en.n, "Samples per channel");
  ensemble->add_option("--p", en.p, "Channels (correlation-degree preset)");
  ensemble->add_option("--m", en.cfg.m, "Embedding dimension");
  ensemble->add_option("--c", en.cfg.c, "Class count");
  ensemble->add_option("--max-scale", en.cfg.max_scale, "Largest scale factor");
  ensemble->add_option("--graph-policy", en.policy, "zero | theoretical | estimated | complete")
      ->check(CLI::IsMember({"zero", "theoretical", "estimated", "complete"}));
  ensemble->add_option("--seed", en.seed, "64-bit seed");
  ensemble->add_option("--rho", en.rho, "In-block correlation for correlated-sets");
  ensemble->add_option("--threads", en.threads, "OpenMP threads (0 = runtime default)");
  ensemble->add_option("--out", en.out, "Output prefix (writes .csv and .json)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (graph->parsed()) return cmd_graph(gr, out);
    if (entropy->parsed()) return cmd_entropy(ent, out);
    if (bench->parsed()) return cmd_bench(bn, out);
    if (ensemble->parsed()) return cmd_ensemble(en, out);
  } catch (const FactorizationError& e) {
    err << "error: " << e.what() << " (minor " << e.minor() << ")\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mvdeg::cli
