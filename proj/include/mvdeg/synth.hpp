#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvdeg/signal.hpp"

namespace mvdeg {

enum class GeneratorKind { wgn, one_over_f, correlated, mixture };

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& s);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::wgn;
  std::size_t p = 3;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  Eigen::MatrixXd corr;  // correlated only
  std::size_t q = 0;     // mixture only: number of leading WGN channels

  void validate() const;
  /// Channel count of the produced signal (3 for mixtures).
  std::size_t channels() const { return kind == GeneratorKind::mixture ? 3 : p; }
};

/// Signal for `spec` (spec.seed used directly).
MultivariateSignal generate(const GeneratorSpec& spec);
/// Realization r of an ensemble: same spec, seed realization_seed(spec.seed, r).
MultivariateSignal generate_realization(const GeneratorSpec& spec, std::uint64_t r);

/// i.i.d. N(0,1); channel ch draws from substream derive_seed(seed, ch).
MultivariateSignal gen_wgn(std::size_t p, std::size_t n, std::uint64_t seed);

/// Spectrally shaped noise with power ~ 1/f, zero DC, standardized per channel
/// to mean 0 and variance 1 (N-1 denominator).
MultivariateSignal gen_one_over_f(std::size_t p, std::size_t n, std::uint64_t seed);

/// Gaussian vectors with correlation `corr`, via L z with L the lower
/// triangular factor of corr.
MultivariateSignal gen_correlated(std::size_t p, std::size_t n, const Eigen::MatrixXd& corr, std::uint64_t seed);

/// Trivariate: first q channels WGN, remaining 3-q channels 1/f, independent.
MultivariateSignal gen_mixture_F(std::size_t q, std::size_t n, std::uint64_t seed);

/// Lower-triangular L with L L^T = corr for positive semidefinite input.
/// Pivots in [-tol, tol] are treated as zero (rank deficiency); a pivot below
/// -tol raises FactorizationError naming the leading minor.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& corr, double tol = 1e-10);

/// Symmetric, unit diagonal, entries in [-1, 1]; throws otherwise.
void check_correlation_matrix(const Eigen::MatrixXd& corr);

/// p x p with every off-diagonal entry rho.
Eigen::MatrixXd uniform_correlation(std::size_t p, double rho);

/// Block-diagonal correlation: channels inside one block share correlation rho;
/// channels in different blocks are uncorrelated. `blocks` lists block sizes.
Eigen::MatrixXd block_correlation(const std::vector<std::size_t>& blocks, double rho);

/// Boundary-voltage frames of an electrode array: value (i, j, t) for electrode
/// i, measurement j, frame t.
struct ErtFrames {
  std::size_t electrodes = 16;
  std::size_t measurements = 13;
  std::size_t frames = 0;
  std::vector<double> values;  // index (t * electrodes + i) * measurements + j

  double at(std::size_t i, std::size_t j, std::size_t t) const {
    return values[(t * electrodes + i) * measurements + j];
  }
  double& at(std::size_t i, std::size_t j, std::size_t t) { return values[(t * electrodes + i) * measurements + j]; }
};

/// Per-electrode mean relative voltage change against the baseline frame:
/// V_i(t) = (1/J) sum_j (V_ij(t) - B_ij) / B_ij. `baseline` is electrodes x
/// measurements.
MultivariateSignal ert_features(const ErtFrames& voltages, const Eigen::MatrixXd& baseline);

}  // namespace mvdeg
