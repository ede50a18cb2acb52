#include "mvdeg/entropy.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mvdeg/error.hpp"
#include "mvdeg/kron.hpp"

namespace mvdeg {

void EmbeddingConfig::validate() const {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "embedding dimension m must be >= 2");
  if (c < 2) throw Error(ErrorKind::InvalidArgument, "class count c must be >= 2");
  if (max_scale < 1) throw Error(ErrorKind::InvalidArgument, "max_scale must be >= 1");
}

const ScaleRecord& EntropyCurve::at_scale(std::size_t tau) const {
  for (const auto& r : records) {
    if (r.tau == tau) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "curve has no record for scale " + std::to_string(tau));
}

std::vector<double> coarse_grain_series(std::span<const double> x, std::size_t tau) {
  if (tau < 1 || tau > x.size()) {
    throw Error(ErrorKind::InvalidArgument, "scale factor must satisfy 1 <= tau <= N");
  }
  const std::size_t len = x.size() / tau;
  if (len < 2) {
    throw ScaleUndefinedError(static_cast<int>(tau), "scale " + std::to_string(tau) +
                                                         " leaves fewer than 2 coarse-grained samples");
  }
  std::vector<double> out(len);
  const double inv = static_cast<double>(tau);
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (std::size_t b = i * tau; b < (i + 1) * tau; ++b) sum += x[b];
    out[i] = sum / inv;
  }
  return out;
}

MultivariateSignal coarse_grain(const MultivariateSignal& signal, std::size_t tau) {
  if (tau == 1) return signal;
  std::vector<std::vector<double>> channels(signal.channels());
  for (std::size_t ch = 0; ch < signal.channels(); ++ch) {
    channels[ch] = coarse_grain_series(signal.channel(ch), tau);
  }
  return MultivariateSignal::from_channels(channels, signal.labels());
}

double sample_mean(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return 0.0;
  const double mu = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

int ncdf_class(double x, double mu, double sd, std::size_t c) noexcept {
  const double cd = static_cast<double>(c);
  double level;
  if (sd > 0.0) {
    const double z = (x - mu) / sd;
    level = cd * (0.5 * std::erfc(-z / std::numbers::sqrt2)) + 0.5;
  } else {
    level = cd / 2.0 + 0.5;
  }
  return static_cast<int>(std::clamp(std::round(level), 1.0, cd));
}

namespace {

struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> sd;
};

ChannelStats channel_stats(const MultivariateSignal& signal) {
  ChannelStats s;
  for (std::size_t ch = 0; ch < signal.channels(); ++ch) {
    const auto x = signal.channel(ch);
    s.mean.push_back(sample_mean(x));
    s.sd.push_back(sample_sd(x));
  }
  return s;
}

void require_length(std::size_t len, std::size_t m, std::size_t tau) {
  if (len < m + 1) {
    throw ScaleUndefinedError(static_cast<int>(tau), "scale " + std::to_string(tau) + ": coarse-grained length " +
                                                         std::to_string(len) + " < m+1 = " + std::to_string(m + 1));
  }
}

// Folds per-thread accumulators in thread-index order.
DispersionHistogram fold(std::size_t m, std::size_t c, const std::vector<PatternAccumulator>& parts) {
  DispersionHistogram hist(m, c);
  for (const auto& part : parts) part.flush_into(hist);
  return hist;
}

}  // namespace

ClassMatrix ncdf_map(const MultivariateSignal& signal, std::size_t c) {
  if (c < 2) throw Error(ErrorKind::InvalidArgument, "class count c must be >= 2");
  const auto stats = channel_stats(signal);
  ClassMatrix out{signal.channels(), signal.samples(), std::vector<int>(signal.channels() * signal.samples())};
  for (std::size_t t = 0; t < out.samples; ++t) {
    for (std::size_t ch = 0; ch < out.channels; ++ch) {
      out.classes[t * out.channels + ch] = ncdf_class(signal.at(ch, t), stats.mean[ch], stats.sd[ch], c);
    }
  }
  return out;
}

ScaleResult mvdeg_single_scale(const MultivariateSignal& signal, const WeightedGraph& channel_graph, std::size_t m,
                               std::size_t c, Execution exec) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "embedding dimension m must be >= 2");
  if (c < 2) throw Error(ErrorKind::InvalidArgument, "class count c must be >= 2");
  if (channel_graph.size() != signal.channels()) {
    throw Error(ErrorKind::Dimension, "channel graph has " + std::to_string(channel_graph.size()) +
                                          " vertices but the signal has " + std::to_string(signal.channels()) +
                                          " channels");
  }
  require_length(signal.samples(), m, 1);

  const auto stats = channel_stats(signal);
  const HopBasis basis = build_hop_basis(signal, channel_graph, m, exec);
  const std::size_t p = signal.channels();
  const auto rows = static_cast<long long>(basis.rows());

  DispersionHistogram proto(m, c);
  const std::size_t threads = exec == Execution::parallel ? static_cast<std::size_t>(omp_get_max_threads()) : 1;
  std::vector<PatternAccumulator> parts(threads, PatternAccumulator(proto.alphabet_size()));

#pragma omp parallel if (exec == Execution::parallel)
  {
    PatternAccumulator& acc = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (long long r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r);
      if (!basis.row_valid(i)) continue;
      const std::size_t ch = i % p;
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const int cls = ncdf_class(basis.columns[k][i], stats.mean[ch], stats.sd[ch], c);
        code = code * c + static_cast<std::uint64_t>(cls - 1);
      }
      acc.add(code);
    }
  }

  DispersionHistogram hist = fold(m, c, parts);
  if (hist.total() == 0) throw Error(ErrorKind::EmptyPattern, "no embedding vector survived masking");
  const double h = hist.normalized_entropy();
  return {h, std::move(hist)};
}

RealizationCurve mvdeg_scales(const MultivariateSignal& signal, const WeightedGraph& channel_graph,
                              const EmbeddingConfig& cfg, Execution exec) {
  cfg.validate();
  RealizationCurve out;
  for (std::size_t tau = 1; tau <= cfg.max_scale; ++tau) {
    try {
      if (tau > signal.samples()) throw ScaleUndefinedError(static_cast<int>(tau), "scale exceeds signal length");
      const auto z = coarse_grain(signal, tau);
      require_length(z.samples(), cfg.m, tau);
      out.values.push_back(mvdeg_single_scale(z, channel_graph, cfg.m, cfg.c, exec).entropy);
      out.notes.emplace_back();
    } catch (const ScaleUndefinedError& e) {
      out.values.push_back(std::nullopt);
      out.notes.emplace_back(e.what());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyPattern) throw;
      out.values.push_back(std::nullopt);
      out.notes.emplace_back(e.what());
    }
  }
  return out;
}

EntropyCurve summarize(std::string method, const EmbeddingConfig& cfg, std::string graph,
                       const std::vector<RealizationCurve>& realizations) {
  EntropyCurve curve{std::move(method), cfg.m, cfg.c, std::move(graph), std::nullopt, {}};
  const std::size_t n = realizations.size();
  for (std::size_t s = 0; s < cfg.max_scale; ++s) {
    ScaleRecord rec;
    rec.tau = s + 1;
    rec.realizations = n;
    rec.defined = n > 0;
    for (const auto& r : realizations) {
      if (s >= r.values.size() || !r.values[s]) {
        rec.defined = false;
        if (rec.note.empty() && s < r.notes.size()) rec.note = r.notes[s];
      }
    }
    if (rec.defined) {
      double sum = 0.0;
      for (const auto& r : realizations) sum += *r.values[s];
      rec.mean = sum / static_cast<double>(n);
      if (n > 1) {
        double ss = 0.0;
        for (const auto& r : realizations) ss += (*r.values[s] - rec.mean) * (*r.values[s] - rec.mean);
        rec.sd = std::sqrt(ss / static_cast<double>(n - 1));
      }
    } else if (rec.note.empty()) {
      rec.note = "undefined";
    }
    curve.records.push_back(std::move(rec));
  }
  return curve;
}

EntropyCurve mvdeg_curve(const MultivariateSignal& signal, const WeightedGraph& channel_graph,
                         const EmbeddingConfig& cfg, Execution exec) {
  return summarize("mvDEG", cfg, channel_graph.descriptor(), {mvdeg_scales(signal, channel_graph, cfg, exec)});
}

// --- classical baseline ----------------------------------------------------

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

PatternCounts pattern_counts(std::size_t n, std::size_t p, std::size_t m) {
  if (n < 1 || p < 1) throw Error(ErrorKind::InvalidArgument, "pattern_counts needs N >= 1 and p >= 1");
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "pattern_counts needs m >= 2");
  PatternCounts out;
  const BigInt windows = n + 1 >= m ? BigInt(n + 1 - m) : BigInt(0);
  out.classical = windows * binomial(m * p, m);
  out.graph_bound = (n >= m ? BigInt(n - m) : BigInt(0)) * BigInt(p);
  return out;
}

ScaleResult classical_mvde_scale(const MultivariateSignal& signal, std::size_t m, std::size_t c, std::size_t tau,
                                 std::uint64_t pattern_cap, Execution exec) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "embedding dimension m must be >= 2");
  if (c < 2) throw Error(ErrorKind::InvalidArgument, "class count c must be >= 2");
  if (tau < 1 || tau > signal.samples()) {
    throw ScaleUndefinedError(static_cast<int>(tau), "scale " + std::to_string(tau) + " outside 1..N");
  }
  const auto z = coarse_grain(signal, tau);
  const std::size_t len = z.samples();
  const std::size_t p = z.channels();
  require_length(len, m, tau);

  const BigInt count = pattern_counts(len, p, m).classical;
  if (count > BigInt(pattern_cap)) {
    const std::string s = count.str();
    throw CapacityError(s, "classical mvDE refused: " + s + " dispersion patterns exceed the cap of " +
                               std::to_string(pattern_cap));
  }

  const ClassMatrix cls = ncdf_map(z, c);

  // Lexicographic m-subsets of the mp positions; position ch*m + lag.
  const std::size_t width = m * p;
  std::vector<std::size_t> subsets;
  {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      subsets.insert(subsets.end(), idx.begin(), idx.end());
      std::size_t i = m;
      while (i > 0 && idx[i - 1] == width - m + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  const std::size_t n_subsets = subsets.size() / m;

  DispersionHistogram proto(m, c);
  const std::size_t threads = exec == Execution::parallel ? static_cast<std::size_t>(omp_get_max_threads()) : 1;
  std::vector<PatternAccumulator> parts(threads, PatternAccumulator(proto.alphabet_size()));
  const auto starts = static_cast<long long>(len - m + 1);

#pragma omp parallel if (exec == Execution::parallel)
  {
    PatternAccumulator& acc = parts[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<std::uint64_t> digits(width);
#pragma omp for schedule(static)
    for (long long ts = 0; ts < starts; ++ts) {
      const auto t = static_cast<std::size_t>(ts);
      for (std::size_t ch = 0; ch < p; ++ch) {
        for (std::size_t lag = 0; lag < m; ++lag) {
          digits[ch * m + lag] = static_cast<std::uint64_t>(cls.at(ch, t + lag) - 1);
        }
      }
      const std::size_t* s = subsets.data();
      for (std::size_t k = 0; k < n_subsets; ++k, s += m) {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < m; ++i) code = code * c + digits[s[i]];
        acc.add(code);
      }
    }
  }

  DispersionHistogram hist = fold(m, c, parts);
  const double h = hist.normalized_entropy();
  return {h, std::move(hist)};
}

double classical_mvde(const MultivariateSignal& signal, std::size_t m, std::size_t c, std::size_t tau,
                      std::uint64_t pattern_cap, Execution exec) {
  return classical_mvde_scale(signal, m, c, tau, pattern_cap, exec).entropy;
}

EntropyCurve classical_mvde_curve(const MultivariateSignal& signal, const EmbeddingConfig& cfg,
                                  std::uint64_t pattern_cap, Execution exec) {
  cfg.validate();
  RealizationCurve r;
  for (std::size_t tau = 1; tau <= cfg.max_scale; ++tau) {
    try {
      r.values.push_back(classical_mvde(signal, cfg.m, cfg.c, tau, pattern_cap, exec));
      r.notes.emplace_back();
    } catch (const ScaleUndefinedError& e) {
      r.values.push_back(std::nullopt);
      r.notes.emplace_back(e.what());
    } catch (const CapacityError& e) {
      r.values.push_back(std::nullopt);
      r.notes.emplace_back(e.what());
    }
  }
  return summarize("mvDE", cfg, "none", {r});
}

// --- univariate baseline ---------------------------------------------------

ScaleResult univariate_de_scale(std::span<const double> series, std::size_t m, std::size_t c) {
  require_length(series.size(), m, 1);
  const double mu = sample_mean(series);
  const double sd = sample_sd(series);
  std::vector<int> cls(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) cls[t] = ncdf_class(series[t], mu, sd, c);

  DispersionHistogram hist(m, c);
  for (std::size_t t = 0; t + m <= series.size(); ++t) {
    hist.add_pattern(std::span<const int>(cls.data() + t, m));
  }
  const double h = hist.normalized_entropy();
  return {h, std::move(hist)};
}

RealizationCurve univariate_mde_scales(std::span<const double> series, const EmbeddingConfig& cfg) {
  cfg.validate();
  RealizationCurve out;
  for (std::size_t tau = 1; tau <= cfg.max_scale; ++tau) {
    try {
      if (tau > series.size()) throw ScaleUndefinedError(static_cast<int>(tau), "scale exceeds series length");
      const auto z = coarse_grain_series(series, tau);
      require_length(z.size(), cfg.m, tau);
      out.values.push_back(univariate_de_scale(z, cfg.m, cfg.c).entropy);
      out.notes.emplace_back();
    } catch (const ScaleUndefinedError& e) {
      out.values.push_back(std::nullopt);
      out.notes.emplace_back(e.what());
    }
  }
  return out;
}

EntropyCurve univariate_mde(std::span<const double> series, const EmbeddingConfig& cfg) {
  return summarize("MDE", cfg, "none", {univariate_mde_scales(series, cfg)});
}

}  // namespace mvdeg
