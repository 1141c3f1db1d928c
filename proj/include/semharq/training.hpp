#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semharq/checkpoint.hpp"
#include "semharq/codec.hpp"
#include "semharq/corpus.hpp"
#include "semharq/linear_vae.hpp"

namespace semharq {

struct TrainingConfig {
  std::size_t epochs = 30;
  std::size_t patience = 6;
  double learning_rate = 0.03;
  std::size_t batch_size = 16;
  double beta_start = 0.01;
  double beta_end = 1.0;
  std::size_t anneal_epochs = 15;
  double free_bits = 2.0;
  KlConvention kl_convention = KlConvention::clamped_positive;
  std::vector<double> snr_set_db{0.0, 5.0, 10.0, 15.0, 20.0};
  double grad_clip = 5.0;
  /// Recorded only: the decoder has no token-input path to drop words from.
  double word_dropout = 0.5;
  double label_smoothing = 0.1;
  std::uint64_t seed = 1;

  std::size_t vocab_size = 1000;
  CodecConfig codec;

  /// Large-scale configuration (Transformer-sized D, AdamW-era constants,
  /// literal free-bits form).
  static TrainingConfig large_scale_preset();
  void validate() const;
  double beta_at(std::size_t epoch) const;
};

struct ObjectiveSettings {
  double beta = 1.0;
  double lambda_free = 0.0;
  double label_smoothing = 0.0;
  KlConvention convention = KlConvention::literal;
};

/// Reparameterization draw and channel noise for one sentence of a batch.
struct SentenceNoise {
  Eigen::VectorXd eps;
  Eigen::VectorXd channel;
};

/// Batch loss: reconstruction is averaged over all non-padded target
/// positions of the batch, KL is averaged over sentences. When `gradient`
/// is non-null it receives d(total)/d(parameters) (same shapes as the model).
LossBreakdown batch_objective(const LinearVae& model, std::span<const TokenizedSentence> batch,
                              std::span<const SentenceNoise> noise,
                              const ObjectiveSettings& settings, VaeParameters* gradient);

/// Bias-corrected Adam without weight decay.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const VaeParameters& shape, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8);
  void step(VaeParameters& params, const VaeParameters& gradient, double learning_rate);

 private:
  VaeParameters m_;
  VaeParameters v_;
  double beta1_;
  double beta2_;
  double eps_;
  std::size_t t_ = 0;
};

/// Rescales `gradient` so its global L2 norm is at most max_norm; returns
/// the norm before clipping.
double clip_gradient_norm(VaeParameters& gradient, double max_norm);

struct ValidationMetrics {
  double bleu4 = 0.0;
  double similarity = 0.0;
};

/// Mean smoothed BLEU-4 of decode(sample_latent(encode(s))) against s, and
/// mean encoder-mean cosine between s and its reconstruction.
ValidationMetrics evaluate_reconstruction(const SemanticCodec& codec,
                                          std::span<const std::string> sentences,
                                          std::uint64_t seed);

struct EpochLog {
  std::size_t epoch = 0;
  double beta = 0.0;
  double learning_rate = 0.0;
  double train_recon = 0.0;
  double train_kl = 0.0;
  double train_total = 0.0;
  double val_bleu4 = 0.0;
  double val_similarity = 0.0;
  bool improved = false;
};

struct TrainingManifest {
  TrainingConfig config;
  double untrained_val_bleu4 = 0.0;
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
  bool stopped_early = false;

  std::string to_json() const;
};

struct TrainResult {
  Checkpoint best;
  /// Epoch before `last` (Codec-A).
  Checkpoint previous;
  /// Final epoch (Codec-B).
  Checkpoint last;
  TrainingManifest manifest;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Epoch loop: linear beta warm-up, per-batch SNR drawn from the SNR set
/// and applied as AWGN on z, gradient clipping, validation after each epoch,
/// learning-rate halving after ceil(P/3) stalled epochs, early stopping.
/// Throws TrainingDiverged on a non-finite loss.
TrainResult train(const CorpusSplit& corpus, const TrainingConfig& cfg,
                  const EpochCallback& on_epoch = {});

}  // namespace semharq
