#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "semharq/checkpoint.hpp"
#include "semharq/error.hpp"
#include "semharq/linear_vae.hpp"
#include "semharq/training.hpp"
#include "support.hpp"

using namespace semharq;

namespace {

EncoderOutput standard_posterior(std::size_t d, double mu = 0.0) {
  return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), mu),
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("semharq_test_" + name);
}

}  // namespace

TEST(Encode, Deterministic) {
  auto vae = fixtures::random_codec(6, 1);
  auto t = tokenize("a b c", vae.vocabulary(), vae.max_len());
  auto e1 = vae.encode(t);
  auto e2 = vae.encode(t);
  EXPECT_EQ(e1.mu, e2.mu);
  EXPECT_EQ(e1.log_var, e2.log_var);
}

TEST(Encode, ZeroProjectionGivesBias) {
  auto vocab = fixtures::small_vocab({"a", "b"});
  auto p = VaeParameters::zeros(vocab.size(), 3, 4);
  p.enc_mu_b << 0.5, -1.0, 2.0;
  LinearVae vae(vocab, {3, 4}, p);
  for (const char* s : {"a", "b a", ""}) {
    EXPECT_EQ(vae.encode_text(s).mu, p.enc_mu_b) << s;
  }
}

TEST(Encode, TrainedCodecSeparatesSentences) {
  const auto& t = fixtures::trained_codecs();
  const auto& s = t.corpus.test;
  EXPECT_GT((t.b.encode_text(s[0]).mu - t.b.encode_text(s[1]).mu).norm(), 1e-6);
}

TEST(Encode, WrongVocabularyIdThrows) {
  auto vae = fixtures::random_codec(4, 2);
  TokenizedSentence t{{0, 500, 1}};
  EXPECT_THROW(vae.encode(t), DimensionMismatch);
}

TEST(SampleLatent, DegenerateVarianceReturnsMean) {
  EncoderOutput e{Eigen::VectorXd::LinSpaced(4, -1.0, 1.0),
                  Eigen::VectorXd::Constant(4, -std::numeric_limits<double>::infinity())};
  Rng rng(3);
  EXPECT_EQ(sample_latent(e, rng).values, e.mu);
}

TEST(SampleLatent, TwoDrawsDiffer) {
  auto e = standard_posterior(8);
  Rng rng(4);
  EXPECT_NE(sample_latent(e, rng).values, sample_latent(e, rng).values);
}

TEST(SampleLatent, ReparameterizationStatistics) {
  Eigen::VectorXd mu(3), lv(3);
  mu << 1.5, -0.5, 0.0;
  lv << 0.0, std::log(0.25), std::log(4.0);
  EncoderOutput e{mu, lv};
  Rng rng(5);
  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3), sq = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    auto z = sample_latent(e, rng).values;
    sum += z;
    sq += z.cwiseProduct(z);
  }
  for (int d = 0; d < 3; ++d) {
    const double m = sum[d] / n;
    const double var = sq[d] / n - m * m;
    const double sigma2 = std::exp(lv[d]);
    EXPECT_LT(std::abs(m - mu[d]), 5.0 * std::sqrt(sigma2 / n));
    EXPECT_LT(std::abs(var - sigma2) / sigma2, 0.05);
  }
}

TEST(SampleLatent, DistinctLatentsTrackSigma) {
  const auto& t = fixtures::trained_codecs();
  auto e = t.a.encode_text(t.corpus.test[0]);
  Rng rng(6);
  std::vector<Eigen::VectorXd> z;
  for (int i = 0; i < 10; ++i) z.push_back(sample_latent(e, rng).values);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) EXPECT_GT((z[i] - z[j]).norm(), 0.0);
  }
  // Ten draws: the sample sd is loose, so compare on average over dimensions.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(e.dim());
  for (const auto& v : z) mean += v / 10.0;
  double ratio = 0.0;
  for (Eigen::Index d = 0; d < mean.size(); ++d) {
    double ss = 0.0;
    for (const auto& v : z) ss += (v[d] - mean[d]) * (v[d] - mean[d]);
    ratio += std::sqrt(ss / 9.0) / e.sigma()[d];
  }
  ratio /= static_cast<double>(mean.size());
  EXPECT_NEAR(ratio, 1.0, 0.2);
}

TEST(Decode, GreedyDeterministic) {
  auto vae = fixtures::random_codec(6, 7);
  Rng rng(8);
  LatentVector z(Eigen::VectorXd::NullaryExpr(6, [&] { return standard_normal(rng); }));
  const auto first = vae.decode(z);
  EXPECT_TRUE(first.well_framed(vae.vocabulary().special()));
  for (int i = 0; i < 100; ++i) ASSERT_EQ(vae.decode(z), first);
}

TEST(Decode, CapAppendsEnd) {
  auto vocab = fixtures::small_vocab({"a"});
  auto p = VaeParameters::zeros(vocab.size(), 2, 4);
  for (int t = 0; t < 4; ++t) {
    p.dec_b[t * 5 + 4] = 5.0;   // "a"
    p.dec_b[t * 5 + 1] = -5.0;  // </s>
  }
  LinearVae vae(vocab, {2, 4}, p);
  auto out = vae.decode(LatentVector(Eigen::VectorXd::Zero(2)));
  EXPECT_EQ(out.ids, (std::vector<TokenId>{0, 4, 4, 4, 4, 1}));
  EXPECT_TRUE(out.well_framed(vocab.special()));
}

TEST(Decode, NeverEmitsStartOrPad) {
  auto vocab = fixtures::small_vocab({"a"});
  auto p = VaeParameters::zeros(vocab.size(), 2, 3);
  for (int t = 0; t < 3; ++t) {
    p.dec_b[t * 5 + 0] = 9.0;
    p.dec_b[t * 5 + 2] = 9.0;
  }
  LinearVae vae(vocab, {2, 3}, p);
  Rng rng(9);
  LatentVector z(Eigen::VectorXd::Zero(2));
  for (const auto& out : {vae.decode(z), vae.decode_sampled(z, 1.0, rng)}) {
    EXPECT_TRUE(out.well_framed(vocab.special()));
    for (std::size_t i = 1; i < out.ids.size(); ++i) {
      EXPECT_NE(out.ids[i], vocab.special().bos);
      EXPECT_NE(out.ids[i], vocab.special().pad);
    }
  }
}

TEST(Decode, RejectsBadLatents) {
  auto vae = fixtures::random_codec(4, 10);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
  z[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(vae.decode(LatentVector(z)), InvalidArgument);
  EXPECT_THROW(vae.decode(LatentVector(Eigen::VectorXd::Zero(3))), DimensionMismatch);
}

TEST(Kl, HandExamples) {
  EXPECT_EQ(kl_free_bits(standard_posterior(4), 0.0), 0.0);
  EXPECT_EQ(kl_free_bits(standard_posterior(4), 0.25), -0.5);
  EXPECT_EQ(kl_free_bits(standard_posterior(1, 1.0), 0.0), 0.0);
  EXPECT_THROW(kl_free_bits(standard_posterior(2), -1.0), InvalidArgument);
}

TEST(Kl, ClampedPositiveForm) {
  // mu=1, sigma=1: per-dimension KL is 0.5.
  EXPECT_DOUBLE_EQ(kl_free_bits(standard_posterior(3, 1.0), 0.0, KlConvention::clamped_positive), 1.5);
  EXPECT_DOUBLE_EQ(kl_free_bits(standard_posterior(3, 1.0), 2.0, KlConvention::clamped_positive), 6.0);
}

TEST(Kl, EveryDimensionRespectsFloor) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), lam(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    EncoderOutput e{Eigen::VectorXd::Constant(1, u(rng)), Eigen::VectorXd::Constant(1, u(rng))};
    const double l = lam(rng);
    ASSERT_GE(-2.0 * kl_free_bits(e, l), l);
  }
}

TEST(Loss, OneHotLogitsGiveZeroRecon) {
  auto vocab = fixtures::small_vocab({"a", "b"});
  auto target = tokenize("a b", vocab, 5);
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(4, 6);
  logits(0, 4) = logits(1, 5) = logits(2, 1) = 1000.0;
  auto l = loss(logits, target, vocab.special(), standard_posterior(2), 0.0, 0.0, 0.0);
  EXPECT_NEAR(l.recon, 0.0, 1e-12);
  EXPECT_EQ(l.total, l.recon);
}

TEST(Loss, UniformLogits) {
  auto vocab = fixtures::small_vocab({"a", "b", "c", "d"});
  auto target = tokenize("a d c", vocab, 6);
  auto l = loss(Eigen::MatrixXd::Zero(5, 8), target, vocab.special(), standard_posterior(2), 0.0,
                0.0, 0.0);
  EXPECT_NEAR(l.recon, std::log(8.0), 1e-12);
  EXPECT_NEAR(l.recon, 2.0794, 1e-4);
}

TEST(Loss, BetaWeightsKl) {
  auto vocab = fixtures::small_vocab({"a"});
  auto target = tokenize("a", vocab, 4);
  auto e = standard_posterior(4);
  auto l = loss(Eigen::MatrixXd::Zero(3, 5), target, vocab.special(), e, 0.5, 0.25, 0.1);
  EXPECT_DOUBLE_EQ(l.total, l.recon + 0.5 * -0.5);
  EXPECT_THROW(loss(Eigen::MatrixXd::Zero(1, 5), target, vocab.special(), e, 0.5, 0.0, 0.0),
               DimensionMismatch);
}

TEST(Loss, MatchesBatchObjectiveWithoutNoise) {
  auto vae = fixtures::random_codec(3, 12, 6);
  auto t = tokenize("a b c", vae.vocabulary(), vae.max_len());
  std::vector<TokenizedSentence> batch;
  batch.push_back(t);
  auto e = vae.encode(t);
  std::vector<SentenceNoise> noise{{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)}};
  ObjectiveSettings s{0.3, 0.2, 0.1, KlConvention::literal};
  auto b = batch_objective(vae, batch, noise, s, nullptr);
  auto l = loss(vae.logits(LatentVector(e.mu)), t, vae.vocabulary().special(), e, 0.3, 0.2, 0.1);
  EXPECT_NEAR(b.recon, l.recon, 1e-12);
  EXPECT_NEAR(b.kl, l.kl, 1e-12);
}

class GradientCheck : public ::testing::TestWithParam<KlConvention> {};

TEST_P(GradientCheck, AnalyticMatchesCentralDifferences) {
  auto vae = fixtures::random_codec(4, 13, 5);
  std::vector<TokenizedSentence> batch;
  for (const char* s : {"a b c", "d e", "f g h a b"}) {
    batch.push_back(tokenize(s, vae.vocabulary(), vae.max_len()));
  }
  Rng rng(14);
  std::vector<SentenceNoise> noise;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    SentenceNoise n{Eigen::VectorXd(4), Eigen::VectorXd(4)};
    for (int d = 0; d < 4; ++d) {
      n.eps[d] = standard_normal(rng);
      n.channel[d] = 0.3 * standard_normal(rng);
    }
    noise.push_back(n);
  }
  ObjectiveSettings s{0.7, 0.1, 0.1, GetParam()};

  VaeParameters grad = vae.parameters().zeros_like();
  batch_objective(vae, batch, noise, s, &grad);

  std::vector<double> analytic;
  grad.for_each([&](const char*, const double* g, std::size_t n) {
    analytic.insert(analytic.end(), g, g + n);
  });

  const double h = 1e-6;
  std::size_t flat = 0;
  double worst = 0.0;
  auto& params = vae.mutable_parameters();
  params.for_each([&](const char* name, double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i, ++flat) {
      const double saved = p[i];
      p[i] = saved + h;
      const double up = batch_objective(vae, batch, noise, s, nullptr).total;
      p[i] = saved - h;
      const double down = batch_objective(vae, batch, noise, s, nullptr).total;
      p[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[flat];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-4});
      worst = std::max(worst, rel);
      ASSERT_LE(rel, 1e-4) << name << "[" << i << "] analytic " << a << " numeric " << numeric;
    }
  });
  EXPECT_EQ(flat, analytic.size());
  RecordProperty("worst_relative_error", std::to_string(worst));
}

INSTANTIATE_TEST_SUITE_P(Conventions, GradientCheck,
                         ::testing::Values(KlConvention::literal, KlConvention::clamped_positive));

TEST(Checkpoint, RoundTripIsExact) {
  auto vae = fixtures::random_codec(5, 15);
  auto c = Checkpoint::from_model(vae, 7, 0.25, 0.5);
  const auto path = temp_path("roundtrip.json");
  save_checkpoint(c, path);
  auto back = load_checkpoint(path);
  EXPECT_EQ(back.vocab, c.vocab);
  EXPECT_EQ(back.params, c.params);
  EXPECT_EQ(back.epoch, 7u);
  EXPECT_EQ(back.config.latent_dim, 5u);
  EXPECT_EQ(checkpoint_to_json(back), checkpoint_to_json(c));
  std::filesystem::remove(path);
}

TEST(Checkpoint, UnsupportedVersion) {
  auto c = Checkpoint::from_model(fixtures::random_codec(3, 16), 0, 0.0, 0.0);
  auto j = nlohmann::json::parse(checkpoint_to_json(c));
  j["version"] = 99;
  EXPECT_THROW(checkpoint_from_json(j.dump()), FormatError);
}

TEST(Checkpoint, WrongDimension) {
  auto c = Checkpoint::from_model(fixtures::random_codec(3, 17), 0, 0.0, 0.0);
  auto j = nlohmann::json::parse(checkpoint_to_json(c));
  j["config"]["latent_dim"] = 4;
  EXPECT_THROW(checkpoint_from_json(j.dump()), DimensionMismatch);
}

TEST(Checkpoint, CorruptFile) {
  const auto path = temp_path("corrupt.json");
  {
    std::ofstream out(path);
    out << "{\"version\": 1, \"config\": ";
  }
  EXPECT_THROW(load_checkpoint(path), FormatError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_checkpoint(path), FormatError);
}

TEST(Training, BetaSchedule) {
  TrainingConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.beta_at(1), 0.01);
  EXPECT_DOUBLE_EQ(cfg.beta_at(16), 1.0);
  EXPECT_DOUBLE_EQ(cfg.beta_at(30), 1.0);
  EXPECT_LT(cfg.beta_at(8), cfg.beta_at(9));
}

TEST(Training, ClipGradientNorm) {
  auto g = fixtures::random_codec(3, 18).parameters();
  const double before = std::sqrt(g.squared_norm());
  EXPECT_DOUBLE_EQ(clip_gradient_norm(g, before / 2.0), before);
  EXPECT_NEAR(std::sqrt(g.squared_norm()), before / 2.0, 1e-9);
  auto same = g;
  clip_gradient_norm(same, 1e9);
  EXPECT_EQ(same, g);
}

TEST(Training, ZeroPatienceStopsAtFirstStall) {
  auto all = filter_by_length(load_sentences(bundled_corpus_path()), 5, 50);
  auto corpus = split_corpus(all, {0.8, 0.1, 0.1}, 1);
  corpus.train.resize(64);
  TrainingConfig cfg;
  cfg.epochs = 40;
  cfg.patience = 0;
  cfg.learning_rate = 1e-6;  // far too small to keep improving
  auto r = train(corpus, cfg);
  const auto& epochs = r.manifest.epochs;
  ASSERT_FALSE(epochs.empty());
  EXPECT_TRUE(r.manifest.stopped_early);
  EXPECT_FALSE(epochs.back().improved);
  for (std::size_t i = 0; i + 1 < epochs.size(); ++i) EXPECT_TRUE(epochs[i].improved);
}

TEST(Training, ImprovesOverUntrained) {
  const auto& t = fixtures::trained_codecs();
  const auto& m = t.result.manifest;
  EXPECT_GT(t.result.best.validation_bleu4, m.untrained_val_bleu4 + 0.3);
  EXPECT_EQ(t.result.last.epoch, m.epochs.size());
  EXPECT_EQ(t.result.previous.epoch + 1, t.result.last.epoch);
}
