#include "semharq/codec.hpp"

#include <algorithm>
#include <cmath>

#include "semharq/error.hpp"

namespace semharq {

KlConvention parse_kl_convention(std::string_view name) {
  if (name == "literal") return KlConvention::literal;
  if (name == "clamped-positive" || name == "clamped_positive") return KlConvention::clamped_positive;
  throw InvalidArgument("unknown kl convention '" + std::string(name) + "'");
}

std::string to_string(KlConvention convention) {
  return convention == KlConvention::literal ? "literal" : "clamped-positive";
}

EncoderOutput SemanticCodec::encode_text(std::string_view text) const {
  return encode(tokenize(text, vocabulary(), max_len()));
}

std::string SemanticCodec::decode_text(const LatentVector& z) const {
  return semharq::detokenize(decode(z), vocabulary());
}

std::string SemanticCodec::detokenize(const TokenizedSentence& sentence) const {
  return semharq::detokenize(sentence, vocabulary());
}

LatentVector sample_latent(const EncoderOutput& e, Rng& rng) {
  if (e.mu.size() != e.log_var.size()) {
    throw DimensionMismatch("sample_latent: mu and log_var differ in length");
  }
  Eigen::VectorXd z(e.mu.size());
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    z[d] = e.mu[d] + std::exp(0.5 * e.log_var[d]) * standard_normal(rng);
  }
  return LatentVector(std::move(z));
}

double kl_free_bits(const EncoderOutput& e, double lambda_free, KlConvention convention) {
  if (lambda_free < 0.0) throw InvalidArgument("kl_free_bits: lambda_free must be >= 0");
  if (e.mu.size() != e.log_var.size()) {
    throw DimensionMismatch("kl_free_bits: mu and log_var differ in length");
  }
  double acc = 0.0;
  for (Eigen::Index d = 0; d < e.mu.size(); ++d) {
    const double inner = 1.0 + e.log_var[d] - e.mu[d] * e.mu[d] - std::exp(e.log_var[d]);
    if (convention == KlConvention::literal) {
      acc += std::max(inner, lambda_free);
    } else {
      acc += std::max(-0.5 * inner, lambda_free);
    }
  }
  return convention == KlConvention::literal ? -0.5 * acc : acc;
}

LossBreakdown loss(const Eigen::MatrixXd& logits, const TokenizedSentence& target,
                   const SpecialTokens& special, const EncoderOutput& e, double beta,
                   double lambda_free, double label_smoothing, KlConvention convention) {
  const std::size_t framed = target.framed_length(special);
  if (framed < 2) throw DimensionMismatch("loss: target has no positions to predict");
  const auto positions = static_cast<Eigen::Index>(framed - 1);
  if (logits.rows() < positions) {
    throw DimensionMismatch("loss: logits cover " + std::to_string(logits.rows()) +
                            " positions, target needs " + std::to_string(positions));
  }
  const Eigen::Index vocab = logits.cols();
  const double off = label_smoothing / static_cast<double>(vocab);

  double recon = 0.0;
  for (Eigen::Index t = 0; t < positions; ++t) {
    const TokenId y = target.ids[static_cast<std::size_t>(t + 1)];
    if (y < 0 || y >= vocab) throw DimensionMismatch("loss: target id outside logits width");
    const auto row = logits.row(t);
    const double max = row.maxCoeff();
    const double log_z = max + std::log((row.array() - max).exp().sum());
    const double sum_log_p = row.sum() - static_cast<double>(vocab) * log_z;
    recon += -(1.0 - label_smoothing) * (row[y] - log_z) - off * sum_log_p;
  }
  recon /= static_cast<double>(positions);

  LossBreakdown out;
  out.recon = recon;
  out.kl = kl_free_bits(e, lambda_free, convention);
  out.beta = beta;
  out.total = out.recon + beta * out.kl;
  return out;
}

}  // namespace semharq
