#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "semharq/codec.hpp"

namespace semharq {

enum class BiasMode {
  none,
  /// Bias comes from decoding with a different checkpoint; identity here.
  misaligned_codec,
  /// A fixed direction drawn once from the channel seed.
  synthetic,
};

BiasMode parse_bias_mode(std::string_view name);
std::string to_string(BiasMode mode);

struct ChannelConfig {
  /// +infinity disables additive noise.
  double snr_db = std::numeric_limits<double>::infinity();
  BiasMode bias_mode = BiasMode::none;
  /// Synthetic bias energy as a fraction of D * P_z.
  double bias_scale = 0.1;
  std::uint64_t seed = 0;
};

struct LatentPowerEstimate {
  double p_z = 0.0;
  std::size_t samples = 0;
};

/// Mean of |z|^2 / D over the given latents.
LatentPowerEstimate latent_power(std::span<const LatentVector> latents);

/// Monte-Carlo P_z over n_samples latents, cycling through `sentences`.
LatentPowerEstimate measure_latent_power(const SemanticCodec& codec,
                                         std::span<const std::string> sentences,
                                         std::size_t n_samples, Rng& rng);

/// sigma_n^2 = p_z * 10^(-snr_db / 10); zero for snr_db = +inf.
double noise_variance(double snr_db, double p_z);

/// z + n with n ~ N(0, variance I).
LatentVector apply_awgn(const LatentVector& z, double variance, Rng& rng);

/// The synthetic bias b with |b|^2 = scale * dim * p_z; a pure function of
/// (seed, dim, scale, p_z).
Eigen::VectorXd synthetic_bias(const ChannelConfig& cfg, std::size_t dim, double p_z);

/// Adds the synthetic bias; identity for the other modes.
LatentVector apply_bias(const LatentVector& z, const ChannelConfig& cfg, double p_z);

/// Bias followed by AWGN, with the bias vector and noise variance computed
/// once for a fixed latent power.
class SemanticChannel {
 public:
  SemanticChannel(ChannelConfig cfg, std::size_t dim, double p_z);

  LatentVector transmit(const LatentVector& z, Rng& rng) const;

  const ChannelConfig& config() const { return cfg_; }
  double noise_variance() const { return variance_; }
  double p_z() const { return p_z_; }

 private:
  ChannelConfig cfg_;
  double p_z_;
  double variance_;
  Eigen::VectorXd bias_;
};

}  // namespace semharq
