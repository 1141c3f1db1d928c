#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "semharq/corpus.hpp"
#include "semharq/rng.hpp"

namespace semharq {

/// A point in the shared latent space R^D (z, z-tilde or z-hat).
struct LatentVector {
  Eigen::VectorXd values;

  LatentVector() = default;
  explicit LatentVector(Eigen::VectorXd v) : values(std::move(v)) {}

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
  bool finite() const { return values.allFinite(); }
};

/// Posterior statistics produced by the encoder.
struct EncoderOutput {
  Eigen::VectorXd mu;
  Eigen::VectorXd log_var;

  std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }
  Eigen::VectorXd sigma() const { return (0.5 * log_var.array()).exp().matrix(); }
};

/// Lower/upper bound applied to log-variance before exponentiation.
inline constexpr double kLogVarMin = -8.0;
inline constexpr double kLogVarMax = 8.0;

enum class KlConvention {
  /// -1/2 sum_d max(1 + log var_d - mu_d^2 - var_d, lambda), taken literally (sign included).
  literal,
  /// sum_d max(KL_d, lambda): the usual free-bits floor on positive per-dim KL.
  clamped_positive,
};

KlConvention parse_kl_convention(std::string_view name);
std::string to_string(KlConvention convention);

/// Receiver/transmitter view of a stochastic semantic codec.
class SemanticCodec {
 public:
  virtual ~SemanticCodec() = default;

  virtual std::size_t latent_dim() const = 0;
  virtual const Vocabulary& vocabulary() const = 0;
  /// Sequence length (including framing) used when tokenizing input text.
  virtual std::size_t max_len() const = 0;

  /// Deterministic: equal inputs give equal outputs.
  virtual EncoderOutput encode(const TokenizedSentence& sentence) const = 0;
  /// Greedy decode. Stops at the first </s> or at the decode cap, in which
  /// case </s> is appended. Throws on non-finite or wrongly sized latents.
  virtual TokenizedSentence decode(const LatentVector& z) const = 0;
  /// Temperature-sampled decode; same framing guarantees as decode().
  virtual TokenizedSentence decode_sampled(const LatentVector& z, double temperature,
                                           Rng& rng) const = 0;

  EncoderOutput encode_text(std::string_view text) const;
  std::string decode_text(const LatentVector& z) const;
  std::string detokenize(const TokenizedSentence& sentence) const;
};

/// z = mu + exp(0.5 log var) * eps with eps ~ N(0, I). Uses the raw
/// log-variance, so log var = -inf yields z = mu.
LatentVector sample_latent(const EncoderOutput& e, Rng& rng);

/// Free-bits KL term for one posterior under the chosen convention.
double kl_free_bits(const EncoderOutput& e, double lambda_free,
                    KlConvention convention = KlConvention::literal);

struct LossBreakdown {
  double recon = 0.0;
  double kl = 0.0;
  double total = 0.0;
  double beta = 0.0;
};

/// `logits` holds one row per generated position (position 1 onwards) and
/// one column per vocabulary entry. Reconstruction is the mean
/// label-smoothed cross-entropy over the non-padded target positions
/// (words and the closing </s>).
LossBreakdown loss(const Eigen::MatrixXd& logits, const TokenizedSentence& target,
                   const SpecialTokens& special, const EncoderOutput& e, double beta,
                   double lambda_free, double label_smoothing,
                   KlConvention convention = KlConvention::literal);

}  // namespace semharq
