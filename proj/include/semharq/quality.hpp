#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "semharq/codec.hpp"

namespace semharq {

/// Receiver-side estimators. The tag letters follow the usual table order.
enum class QualityMetric {
  A,  // VAE uncertainty
  B,  // latent self-consistency
  C,  // decoder agreement over N sampled passes
  D,  // latent distance
  E,  // text BLEU-1 between first and second decode
  F,  // token-set Jaccard between first and second decode
};

inline constexpr QualityMetric kAllQualityMetrics[] = {QualityMetric::A, QualityMetric::B,
                                                       QualityMetric::C, QualityMetric::D,
                                                       QualityMetric::E, QualityMetric::F};

/// Accepts "A".."F" in either case.
QualityMetric parse_quality_metric(std::string_view name);
std::string to_string(QualityMetric metric);

struct QualityConfig {
  QualityMetric metric = QualityMetric::B;
  /// Decode passes for metric C.
  std::size_t n_passes = 5;
  /// Division guard for metric D.
  double epsilon = 1e-8;
  /// Sampling temperature of the metric C passes; <= 0 selects greedy
  /// passes, which makes metric C identically 1.
  double temperature = 1.0;
  /// Brevity penalty inside metric E.
  bool brevity_penalty = true;

  void validate() const;
};

struct QualityScore {
  double value = 0.0;
  QualityMetric metric = QualityMetric::A;
};

// Closed-form pieces, exposed for testing.

/// max(0, 1 - mean(sigma)).
double uncertainty_score(const Eigen::VectorXd& sigma);
/// max(0, 1 - |mu - mu2| / sqrt(D)); symmetric in its arguments.
double distance_penalty(const Eigen::VectorXd& mu, const Eigen::VectorXd& mu2);
/// max(0, cos(mu, mu2)) * distance_penalty; 0 when either vector is zero.
double self_consistency_score(const Eigen::VectorXd& mu, const Eigen::VectorXd& mu2);
/// Fraction of outputs equal to the first one.
double agreement_score(std::span<const std::string> outputs);
/// max(0, 1 - |z - mu| / (|mu| + epsilon)).
double latent_distance_score(const Eigen::VectorXd& z, const Eigen::VectorXd& mu, double epsilon);
/// Unsmoothed BLEU-1 of `first` against `second`; 1 when the two are equal.
double text_bleu_score(std::span<const std::string> first, std::span<const std::string> second,
                       bool brevity_penalty);

// Estimators. Each takes the received latent and the receiver codec.

QualityScore metric_a_vae_uncertainty(const LatentVector& z, const SemanticCodec& codec);
QualityScore metric_b_self_consistency(const LatentVector& z, const SemanticCodec& codec);
QualityScore metric_c_decoder_entropy(const LatentVector& z, const SemanticCodec& codec,
                                      const QualityConfig& cfg, Rng& rng);
QualityScore metric_d_latent_distance(const LatentVector& z, const SemanticCodec& codec,
                                      const QualityConfig& cfg);
QualityScore metric_e_text_bleu(const LatentVector& z, const SemanticCodec& codec,
                                const QualityConfig& cfg);
QualityScore metric_f_text_similarity(const LatentVector& z, const SemanticCodec& codec);

/// Dispatches on cfg.metric.
QualityScore estimate(const LatentVector& z, const QualityConfig& cfg, const SemanticCodec& codec,
                      Rng& rng);

}  // namespace semharq
