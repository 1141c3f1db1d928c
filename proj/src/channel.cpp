#include "semharq/channel.hpp"

#include <cmath>

#include "semharq/error.hpp"

namespace semharq {

BiasMode parse_bias_mode(std::string_view name) {
  if (name == "none") return BiasMode::none;
  if (name == "misaligned-codec" || name == "misaligned_codec" || name == "misaligned") {
    return BiasMode::misaligned_codec;
  }
  if (name == "synthetic") return BiasMode::synthetic;
  throw InvalidArgument("unknown bias mode '" + std::string(name) + "'");
}

std::string to_string(BiasMode mode) {
  switch (mode) {
    case BiasMode::none: return "none";
    case BiasMode::misaligned_codec: return "misaligned-codec";
    case BiasMode::synthetic: return "synthetic";
  }
  return "none";
}

LatentPowerEstimate latent_power(std::span<const LatentVector> latents) {
  if (latents.empty()) throw InvalidArgument("latent_power: no latents");
  double acc = 0.0;
  for (const auto& z : latents) {
    if (z.dim() == 0) throw DimensionMismatch("latent_power: empty latent");
    acc += z.values.squaredNorm() / static_cast<double>(z.dim());
  }
  return {acc / static_cast<double>(latents.size()), latents.size()};
}

LatentPowerEstimate measure_latent_power(const SemanticCodec& codec,
                                         std::span<const std::string> sentences,
                                         std::size_t n_samples, Rng& rng) {
  if (sentences.empty()) throw InvalidArgument("measure_latent_power: empty sentence list");
  if (n_samples < 1) throw InvalidArgument("measure_latent_power: n_samples must be >= 1");
  std::vector<EncoderOutput> posteriors;
  posteriors.reserve(sentences.size());
  for (const auto& s : sentences) posteriors.push_back(codec.encode_text(s));
  double acc = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto z = sample_latent(posteriors[i % posteriors.size()], rng);
    acc += z.values.squaredNorm() / static_cast<double>(z.dim());
  }
  return {acc / static_cast<double>(n_samples), n_samples};
}

double noise_variance(double snr_db, double p_z) {
  if (!(p_z > 0.0)) throw InvalidArgument("noise_variance: p_z must be positive");
  if (std::isnan(snr_db)) throw InvalidArgument("noise_variance: snr is NaN");
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return p_z * std::pow(10.0, -snr_db / 10.0);
}

LatentVector apply_awgn(const LatentVector& z, double variance, Rng& rng) {
  if (variance < 0.0) throw InvalidArgument("apply_awgn: negative variance");
  if (variance == 0.0) return z;
  const double sd = std::sqrt(variance);
  Eigen::VectorXd out = z.values;
  for (Eigen::Index d = 0; d < out.size(); ++d) out[d] += sd * standard_normal(rng);
  return LatentVector(std::move(out));
}

Eigen::VectorXd synthetic_bias(const ChannelConfig& cfg, std::size_t dim, double p_z) {
  if (cfg.bias_scale < 0.0) throw InvalidArgument("synthetic bias: scale must be >= 0");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  if (cfg.bias_scale == 0.0 || dim == 0) return b;
  Rng rng(derive_seed(cfg.seed, 0xb1a5, dim));
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index d = 0; d < b.size(); ++d) b[d] = standard_normal(rng);
    norm = b.norm();
  }
  return b * (std::sqrt(cfg.bias_scale * static_cast<double>(dim) * p_z) / norm);
}

LatentVector apply_bias(const LatentVector& z, const ChannelConfig& cfg, double p_z) {
  if (cfg.bias_scale < 0.0) throw InvalidArgument("apply_bias: scale must be >= 0");
  if (cfg.bias_mode != BiasMode::synthetic) return z;
  return LatentVector(z.values + synthetic_bias(cfg, z.dim(), p_z));
}

SemanticChannel::SemanticChannel(ChannelConfig cfg, std::size_t dim, double p_z)
    : cfg_(cfg), p_z_(p_z), variance_(semharq::noise_variance(cfg.snr_db, p_z)) {
  if (cfg_.bias_mode == BiasMode::synthetic) bias_ = synthetic_bias(cfg_, dim, p_z);
}

LatentVector SemanticChannel::transmit(const LatentVector& z, Rng& rng) const {
  if (bias_.size() == 0) return apply_awgn(z, variance_, rng);
  if (bias_.size() != z.values.size()) throw DimensionMismatch("channel: latent dimension changed");
  return apply_awgn(LatentVector(z.values + bias_), variance_, rng);
}

}  // namespace semharq
