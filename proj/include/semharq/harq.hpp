#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semharq/channel.hpp"
#include "semharq/codec.hpp"
#include "semharq/combining.hpp"
#include "semharq/quality.hpp"

namespace semharq {

struct HarqConfig {
  double q_th = 0.85;
  std::size_t k_max = 5;
  QualityConfig quality;
  CombinerSpec combiner;
  ChannelConfig channel;

  void validate() const;
};

/// Transmitter codec, receiver codec and the channel between them. The
/// codecs are borrowed and must outlive the link.
class HarqLink {
 public:
  /// Throws DimensionMismatch when the two codecs disagree on D.
  HarqLink(const SemanticCodec& tx, const SemanticCodec& rx, const ChannelConfig& channel,
           double p_z);

  const SemanticCodec& tx() const { return *tx_; }
  const SemanticCodec& rx() const { return *rx_; }
  const SemanticChannel& channel() const { return channel_; }

 private:
  const SemanticCodec* tx_;
  const SemanticCodec* rx_;
  SemanticChannel channel_;
};

struct HarqSessionResult {
  std::vector<ReceivedAttempt> attempts;
  /// Pre-channel latents, one per attempt.
  std::vector<LatentVector> tx_latents;
  /// 1-based attempt that met the threshold.
  std::optional<std::size_t> ack_at;
  LatentVector combined;
  std::string decoded;
  std::size_t n_transmissions = 0;
};

/// Sends `count` attempts of one posterior and scores each on its own
/// received latent. With `repeat_latent` a single sample is reused for
/// every attempt; otherwise each attempt draws a fresh one. When
/// `stop_at` is set, stops after the first score >= *stop_at.
/// Randomness is consumed attempt by attempt, so the first k attempts of a
/// longer run equal a run with count = k from the same rng state.
HarqSessionResult transmit(const EncoderOutput& posterior, const HarqLink& link,
                           const QualityConfig& quality, std::size_t count, bool repeat_latent,
                           std::optional<double> stop_at, Rng& rng);

/// Combines attempts[0, k) with `spec` and decodes with the RX codec.
HarqSessionResult finish(const HarqSessionResult& sent, std::size_t k, const CombinerSpec& spec,
                         const SemanticCodec& rx);

/// Closed loop: retransmit until a score reaches q_th or k_max attempts
/// were sent, then combine every received attempt. Chase mode repeats one
/// latent.
HarqSessionResult run_session(std::string_view sentence, const HarqConfig& cfg,
                              const HarqLink& link, Rng& rng);

/// Exactly k_forced attempts, no feedback (ack_at stays empty).
HarqSessionResult run_forced(std::string_view sentence, const HarqConfig& cfg,
                             const HarqLink& link, std::size_t k_forced, Rng& rng);

}  // namespace semharq
