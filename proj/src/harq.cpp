#include "semharq/harq.hpp"

#include <cmath>

#include "semharq/error.hpp"

namespace semharq {

void HarqConfig::validate() const {
  if (!(q_th >= 0.0) || std::isnan(q_th)) throw InvalidArgument("harq: q_th must be >= 0");
  if (k_max < 1) throw InvalidArgument("harq: k_max must be >= 1");
  quality.validate();
}

HarqLink::HarqLink(const SemanticCodec& tx, const SemanticCodec& rx, const ChannelConfig& channel,
                   double p_z)
    : tx_(&tx), rx_(&rx), channel_(channel, tx.latent_dim(), p_z) {
  if (tx.latent_dim() != rx.latent_dim()) {
    throw DimensionMismatch("harq: TX codec has D=" + std::to_string(tx.latent_dim()) +
                            " but RX codec has D=" + std::to_string(rx.latent_dim()));
  }
}

HarqSessionResult transmit(const EncoderOutput& posterior, const HarqLink& link,
                           const QualityConfig& quality, std::size_t count, bool repeat_latent,
                           std::optional<double> stop_at, Rng& rng) {
  if (count < 1) throw InvalidArgument("harq: at least one attempt required");
  HarqSessionResult out;
  out.attempts.reserve(count);
  out.tx_latents.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    LatentVector z = repeat_latent && k > 1 ? out.tx_latents.front() : sample_latent(posterior, rng);
    ReceivedAttempt a;
    a.latent = link.channel().transmit(z, rng);
    a.quality = estimate(a.latent, quality, link.rx(), rng);
    a.index = k;
    out.tx_latents.push_back(std::move(z));
    out.attempts.push_back(std::move(a));
    if (stop_at && out.attempts.back().quality.value >= *stop_at) {
      out.ack_at = k;
      break;
    }
  }
  out.n_transmissions = out.attempts.size();
  return out;
}

HarqSessionResult finish(const HarqSessionResult& sent, std::size_t k, const CombinerSpec& spec,
                         const SemanticCodec& rx) {
  if (k < 1 || k > sent.attempts.size()) throw InvalidArgument("harq: prefix length out of range");
  HarqSessionResult out;
  out.attempts.assign(sent.attempts.begin(), sent.attempts.begin() + static_cast<std::ptrdiff_t>(k));
  out.tx_latents.assign(sent.tx_latents.begin(),
                        sent.tx_latents.begin() + static_cast<std::ptrdiff_t>(k));
  if (sent.ack_at && *sent.ack_at <= k) out.ack_at = sent.ack_at;
  out.combined = combine(out.attempts, spec);
  out.decoded = rx.decode_text(out.combined);
  out.n_transmissions = k;
  return out;
}

HarqSessionResult run_session(std::string_view sentence, const HarqConfig& cfg,
                              const HarqLink& link, Rng& rng) {
  cfg.validate();
  const auto posterior = link.tx().encode_text(sentence);
  const auto sent = transmit(posterior, link, cfg.quality, cfg.k_max,
                             cfg.combiner.method == CombinerMethod::chase, cfg.q_th, rng);
  return finish(sent, sent.n_transmissions, cfg.combiner, link.rx());
}

HarqSessionResult run_forced(std::string_view sentence, const HarqConfig& cfg,
                             const HarqLink& link, std::size_t k_forced, Rng& rng) {
  cfg.validate();
  if (k_forced < 1) throw InvalidArgument("harq: k_forced must be >= 1");
  const auto posterior = link.tx().encode_text(sentence);
  const auto sent = transmit(posterior, link, cfg.quality, k_forced,
                             cfg.combiner.method == CombinerMethod::chase, std::nullopt, rng);
  return finish(sent, k_forced, cfg.combiner, link.rx());
}

}  // namespace semharq
