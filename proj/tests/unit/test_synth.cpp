#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "mvdeg/error.hpp"
#include "mvdeg/rng.hpp"
#include "mvdeg/synth.hpp"

using namespace mvdeg;

TEST(Rng, SubstreamsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_NE(realization_seed(5, 0), derive_seed(5, 0));
  NormalSource a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Wgn, DeterministicAndStandard) {
  EXPECT_EQ(gen_wgn(3, 500, 42), gen_wgn(3, 500, 42));
  EXPECT_NE(gen_wgn(3, 500, 42), gen_wgn(3, 500, 43));
  const auto s = gen_wgn(3, 15000, 1);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const auto x = s.channel(ch);
    EXPECT_NEAR(oracle::mean(x), 0.0, 0.05);
    EXPECT_NEAR(oracle::sd(x), 1.0, 0.05);
    for (std::size_t d = ch + 1; d < 3; ++d) EXPECT_LE(std::abs(oracle::pearson(x, s.channel(d))), 0.05);
  }
  EXPECT_NEAR(oracle::welch_slope(s.channel(0)), 0.0, 0.2);
  // Channel substreams do not depend on p.
  EXPECT_EQ(gen_wgn(2, 100, 4).channel(1), gen_wgn(5, 100, 4).channel(1));
}

TEST(OneOverF, SpectrumAndStandardization) {
  EXPECT_EQ(gen_one_over_f(2, 300, 5), gen_one_over_f(2, 300, 5));
  const auto s = gen_one_over_f(3, 15000, 2);
  for (std::size_t ch = 0; ch < 3; ++ch) {
    const auto x = s.channel(ch);
    EXPECT_NEAR(oracle::mean(x), 0.0, 1e-12);
    EXPECT_NEAR(oracle::sd(x) * oracle::sd(x), 1.0, 1e-12);
    EXPECT_NEAR(oracle::welch_slope(x), -1.0, 0.2) << "channel " << ch;
  }
  const auto odd = gen_one_over_f(1, 1001, 3);
  EXPECT_EQ(odd.samples(), 1001u);
  EXPECT_NEAR(oracle::mean(odd.channel(0)), 0.0, 1e-12);
}

TEST(Correlated, IdentityBehavesLikeWhiteNoise) {
  const auto s = gen_correlated(3, 15000, Eigen::MatrixXd::Identity(3, 3), 8);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) EXPECT_LE(std::abs(oracle::pearson(s.channel(a), s.channel(b))), 0.05);
}

TEST(Correlated, TargetCorrelationReached) {
  const auto s = gen_correlated(3, 15000, uniform_correlation(3, 0.95), 9);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) EXPECT_NEAR(oracle::pearson(s.channel(a), s.channel(b)), 0.95, 0.02);
  const auto blocks = gen_correlated(4, 15000, block_correlation({2, 1, 1}, 0.9), 10);
  EXPECT_NEAR(oracle::pearson(blocks.channel(0), blocks.channel(1)), 0.9, 0.02);
  EXPECT_LE(std::abs(oracle::pearson(blocks.channel(1), blocks.channel(2))), 0.05);
}

TEST(Correlated, RankDeficientInputs) {
  const auto pair = gen_correlated(2, 200, uniform_correlation(2, 1.0), 3);
  EXPECT_EQ(pair.channel(0), pair.channel(1));
  const auto all = gen_correlated(4, 200, Eigen::MatrixXd::Ones(4, 4), 3);
  for (std::size_t ch = 1; ch < 4; ++ch) EXPECT_EQ(all.channel(ch), all.channel(0));
}

TEST(Correlated, NonPsdNamesMinor) {
  Eigen::MatrixXd c(3, 3);
  c << 1, 0.9, -0.9,  //
      0.9, 1, 0.9,    //
      -0.9, 0.9, 1;
  try {
    gen_correlated(3, 100, c, 1);
    FAIL();
  } catch (const FactorizationError& e) {
    EXPECT_EQ(e.minor(), 3u);
    EXPECT_EQ(e.kind(), ErrorKind::Factorization);
  }
  Eigen::MatrixXd bad_diag = Eigen::MatrixXd::Identity(2, 2);
  bad_diag(1, 1) = 2.0;
  EXPECT_THROW(check_correlation_matrix(bad_diag), Error);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  EXPECT_THROW(check_correlation_matrix(asym), Error);
}

TEST(Cholesky, ReconstructsRandomPsd) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (std::size_t p = 1; p <= 6; ++p) {
    Eigen::MatrixXd b(p, p + 2);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = g(rng);
    Eigen::MatrixXd cov = b * b.transpose();
    const Eigen::VectorXd d = cov.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd corr = d.asDiagonal() * cov * d.asDiagonal();
    const Eigen::MatrixXd l = psd_cholesky(corr);
    EXPECT_TRUE((l * l.transpose()).isApprox(corr, 1e-12));
    EXPECT_TRUE(l.isLowerTriangular());
  }
}

TEST(Mixture, ChannelSpectra) {
  for (std::size_t q = 0; q <= 3; ++q) {
    const auto s = gen_mixture_F(q, 15000, 100 + q);
    ASSERT_EQ(s.channels(), 3u);
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const double expected = ch < q ? 0.0 : -1.0;
      EXPECT_NEAR(oracle::welch_slope(s.channel(ch)), expected, 0.2) << "q=" << q << " ch=" << ch;
    }
  }
  EXPECT_THROW(gen_mixture_F(4, 100, 1), Error);
  const auto f1 = gen_mixture_F(1, 15000, 55);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) EXPECT_LE(std::abs(oracle::pearson(f1.channel(a), f1.channel(b))), 0.05);
}

TEST(GeneratorSpec, ValidationAndRealizations) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::mixture;
  spec.q = 5;
  EXPECT_THROW(spec.validate(), Error);
  spec.q = 2;
  spec.n = 64;
  spec.seed = 3;
  EXPECT_EQ(generate(spec), gen_mixture_F(2, 64, 3));
  EXPECT_EQ(generate_realization(spec, 4), gen_mixture_F(2, 64, realization_seed(3, 4)));
  EXPECT_NE(generate_realization(spec, 4), generate_realization(spec, 5));
  for (auto k : {GeneratorKind::wgn, GeneratorKind::one_over_f, GeneratorKind::correlated, GeneratorKind::mixture})
    EXPECT_EQ(parse_generator_kind(to_string(k)), k);
  EXPECT_THROW(parse_generator_kind("brown"), Error);
}

namespace {

ErtFrames frames_from(const Eigen::MatrixXd& per_frame, std::size_t t) {
  ErtFrames f;
  f.frames = t;
  f.values.resize(16 * 13 * t);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t i = 0; i < 16; ++i)
      for (std::size_t j = 0; j < 13; ++j) f.at(i, j, k) = per_frame(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return f;
}

}  // namespace

TEST(Ert, Examples) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Eigen::MatrixXd base(16, 13);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 13; ++j) base(i, j) = u(rng);

  const auto same = ert_features(frames_from(base, 4), base);
  EXPECT_EQ(same.channels(), 16u);
  EXPECT_EQ(same.samples(), 4u);
  for (double v : same.vectorized()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(same.labels().front(), "V_R1");
  EXPECT_EQ(same.labels().back(), "V_R16");

  const auto doubled = ert_features(frames_from(2.0 * base, 3), base);
  for (double v : doubled.vectorized()) EXPECT_NEAR(v, 1.0, 1e-15);

  Eigen::MatrixXd bumped = base;
  bumped(0, 0) *= 1.13;
  const auto one = ert_features(frames_from(bumped, 2), base);
  EXPECT_NEAR(one.at(0, 0), 0.01, 1e-15);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_EQ(one.at(i, 1), 0.0);
}

TEST(Ert, ScaleInvarianceAndErrors) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Eigen::MatrixXd base(16, 13);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 13; ++j) base(i, j) = u(rng);
  ErtFrames f;
  f.frames = 5;
  for (std::size_t k = 0; k < 16 * 13 * 5; ++k) f.values.push_back(u(rng));
  ErtFrames g = f;
  for (double& v : g.values) v *= 4.0;
  const auto a = ert_features(f, base), b = ert_features(g, 4.0 * base);
  for (std::size_t i = 0; i < a.vectorized().size(); ++i) EXPECT_NEAR(a.vectorized()[i], b.vectorized()[i], 1e-14);

  Eigen::MatrixXd zero = base;
  zero(2, 5) = 0.0;
  try {
    ert_features(f, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    EXPECT_NE(std::string(e.what()).find("(3,6)"), std::string::npos);
  }
  EXPECT_THROW(ert_features(f, Eigen::MatrixXd::Ones(15, 13)), Error);
}
