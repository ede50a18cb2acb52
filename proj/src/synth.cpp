#include "mvdeg/synth.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "mvdeg/error.hpp"
#include "mvdeg/rng.hpp"

namespace mvdeg {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void standardize(std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mu = sum / n;
  double ss = 0.0;
  for (double& v : x) {
    v -= mu;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  for (double& v : x) v /= sd;
}

std::vector<double> white_channel(std::size_t n, std::uint64_t seed) {
  NormalSource rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.next();
  return x;
}

std::vector<double> pink_channel(std::size_t n, std::uint64_t seed) {
  NormalSource rng(seed);
  const std::size_t bins = n / 2 + 1;
  fftw_complex* spectrum = fftw_alloc_complex(bins);
  std::vector<double> out(n);
  spectrum[0][0] = 0.0;
  spectrum[0][1] = 0.0;
  for (std::size_t f = 1; f < bins; ++f) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(f));
    spectrum[f][0] = amp * rng.next();
    spectrum[f][1] = amp * rng.next();
  }
  if (n % 2 == 0) spectrum[bins - 1][1] = 0.0;  // Nyquist bin is real

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum, out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spectrum);
  standardize(out);
  return out;
}

void check_shape(std::size_t p, std::size_t n) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "generator needs p >= 1");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "generator needs N >= 2");
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::wgn: return "wgn";
    case GeneratorKind::one_over_f: return "one_over_f";
    case GeneratorKind::correlated: return "correlated";
    case GeneratorKind::mixture: return "mixture";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& s) {
  if (s == "wgn") return GeneratorKind::wgn;
  if (s == "one_over_f") return GeneratorKind::one_over_f;
  if (s == "correlated") return GeneratorKind::correlated;
  if (s == "mixture") return GeneratorKind::mixture;
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind '" + s + "'");
}

void GeneratorSpec::validate() const {
  switch (kind) {
    case GeneratorKind::wgn: check_shape(p, n); break;
    case GeneratorKind::one_over_f:
      check_shape(p, n);
      if (n < 4) throw Error(ErrorKind::InvalidArgument, "1/f generator needs N >= 4");
      break;
    case GeneratorKind::correlated:
      check_shape(p, n);
      if (static_cast<std::size_t>(corr.rows()) != p) {
        throw Error(ErrorKind::Dimension, "correlation matrix side differs from p");
      }
      check_correlation_matrix(corr);
      break;
    case GeneratorKind::mixture:
      if (q > 3) throw Error(ErrorKind::InvalidArgument, "mixture q must be in 0..3");
      if (n < 4) throw Error(ErrorKind::InvalidArgument, "mixture needs N >= 4");
      break;
  }
}

MultivariateSignal generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::wgn: return gen_wgn(spec.p, spec.n, spec.seed);
    case GeneratorKind::one_over_f: return gen_one_over_f(spec.p, spec.n, spec.seed);
    case GeneratorKind::correlated: return gen_correlated(spec.p, spec.n, spec.corr, spec.seed);
    case GeneratorKind::mixture: return gen_mixture_F(spec.q, spec.n, spec.seed);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind");
}

MultivariateSignal generate_realization(const GeneratorSpec& spec, std::uint64_t r) {
  GeneratorSpec s = spec;
  s.seed = realization_seed(spec.seed, r);
  return generate(s);
}

MultivariateSignal gen_wgn(std::size_t p, std::size_t n, std::uint64_t seed) {
  check_shape(p, n);
  std::vector<std::vector<double>> channels(p);
  for (std::size_t ch = 0; ch < p; ++ch) channels[ch] = white_channel(n, derive_seed(seed, ch));
  return MultivariateSignal::from_channels(channels);
}

MultivariateSignal gen_one_over_f(std::size_t p, std::size_t n, std::uint64_t seed) {
  check_shape(p, n);
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "1/f generator needs N >= 4");
  std::vector<std::vector<double>> channels(p);
  for (std::size_t ch = 0; ch < p; ++ch) channels[ch] = pink_channel(n, derive_seed(seed, ch));
  return MultivariateSignal::from_channels(channels);
}

MultivariateSignal gen_mixture_F(std::size_t q, std::size_t n, std::uint64_t seed) {
  if (q > 3) throw Error(ErrorKind::InvalidArgument, "mixture q must be in 0..3, got " + std::to_string(q));
  if (n < 4) throw Error(ErrorKind::InvalidArgument, "mixture needs N >= 4");
  std::vector<std::vector<double>> channels(3);
  std::vector<std::string> labels(3);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const bool white = ch < q;
    channels[ch] = white ? white_channel(n, derive_seed(seed, ch)) : pink_channel(n, derive_seed(seed, ch));
    labels[ch] = (white ? "wgn" : "one_over_f") + std::to_string(ch + 1);
  }
  return MultivariateSignal::from_channels(channels, labels);
}

void check_correlation_matrix(const Eigen::MatrixXd& corr) {
  if (corr.rows() < 1 || corr.rows() != corr.cols()) {
    throw Error(ErrorKind::Dimension, "correlation matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < corr.rows(); ++i) {
    if (corr(i, i) != 1.0) throw Error(ErrorKind::InvalidArgument, "correlation matrix diagonal must be 1");
    for (Eigen::Index j = 0; j < corr.cols(); ++j) {
      const double v = corr(i, j);
      if (!std::isfinite(v) || std::abs(v) > 1.0) {
        throw Error(ErrorKind::InvalidArgument, "correlation entries must lie in [-1, 1]");
      }
      if (v != corr(j, i)) throw Error(ErrorKind::InvalidArgument, "correlation matrix is not symmetric");
    }
  }
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& corr, double tol) {
  const Eigen::Index n = corr.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = corr(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -tol) {
      throw FactorizationError(static_cast<int>(j + 1), "matrix is not positive semidefinite: leading minor " +
                                                            std::to_string(j + 1) + " is negative");
    }
    if (d <= tol) {
      // Rank-deficient direction: the remaining column must vanish too.
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double r = corr(i, j);
        for (Eigen::Index k = 0; k < j; ++k) r -= l(i, k) * l(j, k);
        if (std::abs(r) > std::sqrt(tol)) {
          throw FactorizationError(static_cast<int>(i + 1), "matrix is not positive semidefinite: leading minor " +
                                                                std::to_string(i + 1) + " is negative");
        }
      }
      continue;
    }
    const double pivot = std::sqrt(d);
    l(j, j) = pivot;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double r = corr(i, j);
      for (Eigen::Index k = 0; k < j; ++k) r -= l(i, k) * l(j, k);
      l(i, j) = r / pivot;
    }
  }
  return l;
}

MultivariateSignal gen_correlated(std::size_t p, std::size_t n, const Eigen::MatrixXd& corr, std::uint64_t seed) {
  check_shape(p, n);
  if (static_cast<std::size_t>(corr.rows()) != p) throw Error(ErrorKind::Dimension, "correlation matrix side differs from p");
  check_correlation_matrix(corr);
  const Eigen::MatrixXd l = psd_cholesky(corr);

  std::vector<std::vector<double>> z(p);
  for (std::size_t ch = 0; ch < p; ++ch) z[ch] = white_channel(n, derive_seed(seed, ch));
  std::vector<double> values(p * n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < p; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k <= i; ++k) acc += l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * z[k][t];
      values[t * p + i] = acc;
    }
  }
  return MultivariateSignal(p, n, std::move(values));
}

Eigen::MatrixXd uniform_correlation(std::size_t p, double rho) {
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
  c.diagonal().setOnes();
  return c;
}

Eigen::MatrixXd block_correlation(const std::vector<std::size_t>& blocks, double rho) {
  std::size_t p = 0;
  for (auto b : blocks) p += b;
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  Eigen::Index start = 0;
  for (auto b : blocks) {
    const auto sz = static_cast<Eigen::Index>(b);
    for (Eigen::Index i = start; i < start + sz; ++i) {
      for (Eigen::Index j = start; j < start + sz; ++j) {
        if (i != j) c(i, j) = rho;
      }
    }
    start += sz;
  }
  return c;
}

MultivariateSignal ert_features(const ErtFrames& voltages, const Eigen::MatrixXd& baseline) {
  const std::size_t e = voltages.electrodes;
  const std::size_t j_count = voltages.measurements;
  if (static_cast<std::size_t>(baseline.rows()) != e || static_cast<std::size_t>(baseline.cols()) != j_count) {
    throw Error(ErrorKind::Dimension, "baseline shape differs from the voltage frames");
  }
  if (voltages.values.size() != e * j_count * voltages.frames) {
    throw Error(ErrorKind::Dimension, "voltage array size differs from electrodes x measurements x frames");
  }
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t j = 0; j < j_count; ++j) {
      if (baseline(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == 0.0) {
        throw Error(ErrorKind::Degenerate, "baseline voltage at (" + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + ") is zero");
      }
    }
  }
  std::vector<double> values(e * voltages.frames);
  for (std::size_t t = 0; t < voltages.frames; ++t) {
    for (std::size_t i = 0; i < e; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < j_count; ++j) {
        const double b = baseline(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        acc += (voltages.at(i, j, t) - b) / b;
      }
      values[t * e + i] = acc / static_cast<double>(j_count);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < e; ++i) labels.push_back("V_R" + std::to_string(i + 1));
  return MultivariateSignal(e, voltages.frames, std::move(values), std::move(labels));
}

}  // namespace mvdeg
