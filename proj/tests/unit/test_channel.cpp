#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "semharq/channel.hpp"
#include "semharq/error.hpp"
#include "support.hpp"

using namespace semharq;

TEST(LatentPower, DirectArithmetic) {
  std::vector<LatentVector> zeros{LatentVector(Eigen::VectorXd::Zero(4))};
  EXPECT_EQ(latent_power(zeros).p_z, 0.0);
  std::vector<LatentVector> ones{LatentVector(Eigen::VectorXd::Ones(4))};
  EXPECT_EQ(latent_power(ones).p_z, 1.0);
  EXPECT_THROW(latent_power({}), InvalidArgument);
}

TEST(LatentPower, StandardNormalLatents) {
  // Zero parameters: mu = 0 and log-variance = 0 for every input.
  const std::size_t d = 256, n = 1000;
  auto vocab = fixtures::small_vocab({"a"});
  LinearVae vae(vocab, {d, 4});
  std::vector<std::string> s{"a", "a a"};
  Rng rng(1);
  auto est = measure_latent_power(vae, s, n, rng);
  EXPECT_EQ(est.samples, n);
  const double se = std::sqrt(2.0 / static_cast<double>(d * n));
  EXPECT_NEAR(est.p_z, 1.0, 3.0 * se);
  EXPECT_THROW(measure_latent_power(vae, std::vector<std::string>{}, 10, rng), InvalidArgument);
}

TEST(NoiseVariance, Examples) {
  EXPECT_DOUBLE_EQ(noise_variance(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(noise_variance(10.0, 1.0), 0.1);
  EXPECT_NEAR(noise_variance(-9.0, 2.0), 2.0 * std::pow(10.0, 0.9), 1e-12);
  EXPECT_NEAR(noise_variance(-9.0, 2.0), 15.8866, 1e-4);
  EXPECT_EQ(noise_variance(std::numeric_limits<double>::infinity(), 1.0), 0.0);
  EXPECT_THROW(noise_variance(0.0, 0.0), InvalidArgument);
  EXPECT_THROW(noise_variance(0.0, -1.0), InvalidArgument);
}

TEST(NoiseVariance, MonotoneInSnrLinearInPower) {
  for (double p : {0.1, 1.0, 3.5}) {
    for (double snr = -12.0; snr < 12.0; snr += 0.5) {
      EXPECT_GT(noise_variance(snr, p), noise_variance(snr + 0.5, p));
      EXPECT_NEAR(noise_variance(snr, 2.0 * p), 2.0 * noise_variance(snr, p), 1e-12);
    }
  }
}

TEST(Awgn, ZeroVarianceIsIdentity) {
  Rng rng(2);
  LatentVector z(Eigen::VectorXd::LinSpaced(5, -2.0, 2.0));
  EXPECT_EQ(apply_awgn(z, 0.0, rng).values, z.values);
  EXPECT_THROW(apply_awgn(z, -1.0, rng), InvalidArgument);
}

TEST(Awgn, UnbiasedWithRequestedVariance) {
  Rng rng(3);
  const int d = 100000;
  LatentVector z(Eigen::VectorXd::Constant(d, 0.7));
  const double var = 2.5;
  auto noise = (apply_awgn(z, var, rng).values - z.values).eval();
  const double m = noise.mean();
  EXPECT_LT(std::abs(m), 5.0 * std::sqrt(var / d));
  const double v = (noise.array() - m).square().sum() / (d - 1);
  EXPECT_NEAR(v / var, 1.0, 0.02);
}

TEST(Awgn, EmpiricalSnrAtZeroDb) {
  const auto& t = fixtures::trained_codecs();
  Rng rng(4);
  const auto p_z = measure_latent_power(t.a, t.corpus.test, 1000, rng).p_z;
  SemanticChannel ch({0.0, BiasMode::none, 0.1, 0}, t.a.latent_dim(), p_z);
  double signal = 0.0, noise = 0.0;
  std::size_t dims = 0;
  std::size_t i = 0;
  while (dims < 100000) {
    auto z = sample_latent(t.a.encode_text(t.corpus.test[i++ % t.corpus.test.size()]), rng);
    auto y = ch.transmit(z, rng);
    signal += z.values.squaredNorm();
    noise += (y.values - z.values).squaredNorm();
    dims += z.dim();
  }
  EXPECT_NEAR(10.0 * std::log10(signal / noise), 0.0, 0.2);
}

TEST(Bias, ScaleZeroAndNoneAreIdentity) {
  LatentVector z(Eigen::VectorXd::LinSpaced(4, 0.0, 3.0));
  EXPECT_EQ(apply_bias(z, {0.0, BiasMode::synthetic, 0.0, 5}, 1.0).values, z.values);
  EXPECT_EQ(apply_bias(z, {0.0, BiasMode::none, 0.5, 5}, 1.0).values, z.values);
  EXPECT_EQ(apply_bias(z, {0.0, BiasMode::misaligned_codec, 0.5, 5}, 1.0).values, z.values);
  EXPECT_THROW(apply_bias(z, {0.0, BiasMode::synthetic, -0.1, 5}, 1.0), InvalidArgument);
}

TEST(Bias, DeterministicWithRequestedEnergy) {
  ChannelConfig cfg{0.0, BiasMode::synthetic, 0.1, 9};
  auto b1 = synthetic_bias(cfg, 16, 2.0);
  auto b2 = synthetic_bias(cfg, 16, 2.0);
  EXPECT_EQ(b1, b2);
  EXPECT_NEAR(b1.squaredNorm(), 0.1 * 16 * 2.0, 1e-12);
  cfg.seed = 10;
  EXPECT_NE(synthetic_bias(cfg, 16, 2.0), b1);
}

TEST(Bias, ConstantAcrossAttempts) {
  ChannelConfig cfg{std::numeric_limits<double>::infinity(), BiasMode::synthetic, 0.2, 11};
  SemanticChannel ch(cfg, 6, 1.0);
  Rng rng(12);
  LatentVector z(Eigen::VectorXd::Zero(6));
  const auto first = ch.transmit(z, rng).values;
  for (int k = 0; k < 5; ++k) EXPECT_EQ(ch.transmit(z, rng).values, first);
  EXPECT_EQ(first, synthetic_bias(cfg, 6, 1.0));
}

TEST(BiasMode, Parse) {
  EXPECT_EQ(parse_bias_mode("none"), BiasMode::none);
  EXPECT_EQ(parse_bias_mode("misaligned-codec"), BiasMode::misaligned_codec);
  EXPECT_EQ(parse_bias_mode(to_string(BiasMode::synthetic)), BiasMode::synthetic);
  EXPECT_THROW(parse_bias_mode("rayleigh"), InvalidArgument);
}
