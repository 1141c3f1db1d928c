#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Core>

#include "semharq/codec.hpp"

namespace semharq {

struct CodecConfig {
  std::size_t latent_dim = 32;
  /// t_max: number of generated positions before the cap appends </s>.
  std::size_t max_decode_len = 23;

  /// Tokenization length: <s>, up to t_max - 1 words, </s>.
  std::size_t max_len() const { return max_decode_len + 1; }
  void validate() const;
};

/// All trainable arrays of the desk-scale VAE. Decoder heads are stacked:
/// rows [t*V, (t+1)*V) of dec_w predict position t+1.
struct VaeParameters {
  Eigen::MatrixXd enc_mu_w;  // D x V
  Eigen::VectorXd enc_mu_b;  // D
  Eigen::MatrixXd enc_lv_w;  // D x V
  Eigen::VectorXd enc_lv_b;  // D
  Eigen::MatrixXd dec_w;     // (t_max * V) x D
  Eigen::VectorXd dec_b;     // t_max * V

  static VaeParameters zeros(std::size_t vocab, std::size_t latent_dim, std::size_t t_max);
  VaeParameters zeros_like() const;

  std::size_t count() const;
  double squared_norm() const;
  void scale(double factor);
  /// this += factor * other
  void add_scaled(const VaeParameters& other, double factor);

  /// Visits every array as a flat span of values, in a fixed order.
  void for_each(const std::function<void(const char* name, double* data, std::size_t n)>& fn);
  void for_each(const std::function<void(const char* name, const double* data, std::size_t n)>& fn) const;

  friend bool operator==(const VaeParameters& a, const VaeParameters& b);
};

/// Bag-of-tokens encoder (mean-pooled over <s>, words and </s>) with affine
/// heads for mu and log-variance, and an affine decoder with one output head
/// per position.
class LinearVae final : public SemanticCodec {
 public:
  /// All parameters zero.
  LinearVae(Vocabulary vocab, CodecConfig config);
  LinearVae(Vocabulary vocab, CodecConfig config, VaeParameters params);

  /// Small Gaussian weights, zero biases, zero log-variance head.
  static LinearVae random_init(Vocabulary vocab, CodecConfig config, Rng& rng);

  std::size_t latent_dim() const override { return config_.latent_dim; }
  const Vocabulary& vocabulary() const override { return vocab_; }
  std::size_t max_len() const override { return config_.max_len(); }

  EncoderOutput encode(const TokenizedSentence& sentence) const override;
  TokenizedSentence decode(const LatentVector& z) const override;
  TokenizedSentence decode_sampled(const LatentVector& z, double temperature,
                                   Rng& rng) const override;

  const CodecConfig& config() const { return config_; }
  const VaeParameters& parameters() const { return params_; }
  VaeParameters& mutable_parameters() { return params_; }

  /// Sparse encoder input: (token id, weight) pairs whose weights sum to 1.
  std::vector<std::pair<TokenId, double>> pooled_input(const TokenizedSentence& sentence) const;
  /// Log-variance before clamping.
  Eigen::VectorXd raw_log_var(const TokenizedSentence& sentence) const;
  /// Logits for every head, one row per generated position.
  Eigen::MatrixXd logits(const LatentVector& z) const;
  Eigen::VectorXd head_logits(const LatentVector& z, std::size_t position) const;

 private:
  void check_latent(const LatentVector& z) const;
  template <typename Pick>
  TokenizedSentence generate(const LatentVector& z, Pick&& pick) const;

  Vocabulary vocab_;
  CodecConfig config_;
  VaeParameters params_;
};

}  // namespace semharq
