#include "semharq/quality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

#include "semharq/error.hpp"
#include "semharq/metrics.hpp"

namespace semharq {

namespace {

std::vector<std::string> word_tokens(const TokenizedSentence& s, const Vocabulary& vocab) {
  std::vector<std::string> out;
  for (TokenId id : s.words(vocab.special())) out.push_back(vocab.token(id));
  return out;
}

/// First decode, its re-encoding, and the decode of that mean.
struct RoundTrip {
  TokenizedSentence first;
  EncoderOutput first_enc;
  TokenizedSentence second;
};

RoundTrip round_trip(const LatentVector& z, const SemanticCodec& codec) {
  RoundTrip r;
  r.first = codec.decode(z);
  r.first_enc = codec.encode(r.first);
  r.second = codec.decode(LatentVector(r.first_enc.mu));
  return r;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

QualityMetric parse_quality_metric(std::string_view name) {
  if (name.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(name[0]))) {
      case 'A': return QualityMetric::A;
      case 'B': return QualityMetric::B;
      case 'C': return QualityMetric::C;
      case 'D': return QualityMetric::D;
      case 'E': return QualityMetric::E;
      case 'F': return QualityMetric::F;
      default: break;
    }
  }
  throw InvalidArgument("unknown quality metric '" + std::string(name) + "' (expected A-F)");
}

std::string to_string(QualityMetric metric) {
  return std::string(1, static_cast<char>('A' + static_cast<int>(metric)));
}

void QualityConfig::validate() const {
  if (metric == QualityMetric::C && n_passes < 2) {
    throw InvalidArgument("quality: metric C needs n_passes >= 2");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("quality: epsilon must be > 0");
}

double uncertainty_score(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) throw InvalidArgument("uncertainty_score: empty sigma");
  return clamp01(1.0 - sigma.mean());
}

double distance_penalty(const Eigen::VectorXd& mu, const Eigen::VectorXd& mu2) {
  if (mu.size() != mu2.size()) throw DimensionMismatch("distance_penalty: length mismatch");
  if (mu.size() == 0) throw InvalidArgument("distance_penalty: empty vectors");
  return std::max(0.0, 1.0 - (mu - mu2).norm() / std::sqrt(static_cast<double>(mu.size())));
}

double self_consistency_score(const Eigen::VectorXd& mu, const Eigen::VectorXd& mu2) {
  const double delta = distance_penalty(mu, mu2);
  return clamp01(std::max(0.0, cosine(mu, mu2)) * delta);
}

double agreement_score(std::span<const std::string> outputs) {
  if (outputs.empty()) throw InvalidArgument("agreement_score: no outputs");
  const auto same = std::count(outputs.begin(), outputs.end(), outputs.front());
  return static_cast<double>(same) / static_cast<double>(outputs.size());
}

double latent_distance_score(const Eigen::VectorXd& z, const Eigen::VectorXd& mu, double epsilon) {
  if (z.size() != mu.size()) throw DimensionMismatch("latent_distance_score: length mismatch");
  return clamp01(1.0 - (z - mu).norm() / (mu.norm() + epsilon));
}

double text_bleu_score(std::span<const std::string> first, std::span<const std::string> second,
                       bool brevity_penalty) {
  if (std::equal(first.begin(), first.end(), second.begin(), second.end())) return 1.0;
  return clamp01(bleu(first, second, 1, false, brevity_penalty).value);
}

QualityScore metric_a_vae_uncertainty(const LatentVector& z, const SemanticCodec& codec) {
  const auto e = codec.encode(codec.decode(z));
  return {uncertainty_score(e.sigma()), QualityMetric::A};
}

QualityScore metric_b_self_consistency(const LatentVector& z, const SemanticCodec& codec) {
  const auto r = round_trip(z, codec);
  const auto second_enc = codec.encode(r.second);
  return {self_consistency_score(r.first_enc.mu, second_enc.mu), QualityMetric::B};
}

QualityScore metric_c_decoder_entropy(const LatentVector& z, const SemanticCodec& codec,
                                      const QualityConfig& cfg, Rng& rng) {
  if (cfg.n_passes < 2) throw InvalidArgument("quality: metric C needs n_passes >= 2");
  std::vector<std::string> outputs;
  outputs.reserve(cfg.n_passes);
  for (std::size_t n = 0; n < cfg.n_passes; ++n) {
    outputs.push_back(codec.detokenize(codec.decode_sampled(z, cfg.temperature, rng)));
  }
  return {agreement_score(outputs), QualityMetric::C};
}

QualityScore metric_d_latent_distance(const LatentVector& z, const SemanticCodec& codec,
                                      const QualityConfig& cfg) {
  const auto e = codec.encode(codec.decode(z));
  return {latent_distance_score(z.values, e.mu, cfg.epsilon), QualityMetric::D};
}

QualityScore metric_e_text_bleu(const LatentVector& z, const SemanticCodec& codec,
                                const QualityConfig& cfg) {
  const auto r = round_trip(z, codec);
  const auto& vocab = codec.vocabulary();
  return {text_bleu_score(word_tokens(r.first, vocab), word_tokens(r.second, vocab),
                          cfg.brevity_penalty),
          QualityMetric::E};
}

QualityScore metric_f_text_similarity(const LatentVector& z, const SemanticCodec& codec) {
  const auto r = round_trip(z, codec);
  const auto& vocab = codec.vocabulary();
  return {jaccard(word_tokens(r.first, vocab), word_tokens(r.second, vocab)).value,
          QualityMetric::F};
}

QualityScore estimate(const LatentVector& z, const QualityConfig& cfg, const SemanticCodec& codec,
                      Rng& rng) {
  switch (cfg.metric) {
    case QualityMetric::A: return metric_a_vae_uncertainty(z, codec);
    case QualityMetric::B: return metric_b_self_consistency(z, codec);
    case QualityMetric::C: return metric_c_decoder_entropy(z, codec, cfg, rng);
    case QualityMetric::D: return metric_d_latent_distance(z, codec, cfg);
    case QualityMetric::E: return metric_e_text_bleu(z, codec, cfg);
    case QualityMetric::F: return metric_f_text_similarity(z, codec);
  }
  throw InvalidArgument("estimate: unknown quality metric tag");
}

}  // namespace semharq
