#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "semharq/codec.hpp"
#include "semharq/corpus.hpp"
#include "semharq/linear_vae.hpp"
#include "semharq/training.hpp"

namespace semharq::fixtures {

/// Specials plus the given words, in order.
inline Vocabulary small_vocab(const std::vector<std::string>& words) {
  std::vector<std::string> tokens{"<s>", "</s>", "<pad>", "<unk>"};
  tokens.insert(tokens.end(), words.begin(), words.end());
  return Vocabulary(tokens);
}

inline LinearVae random_codec(std::size_t dim, std::uint64_t seed, std::size_t t_max = 8) {
  Rng rng(seed);
  auto vocab = small_vocab({"a", "b", "c", "d", "e", "f", "g", "h"});
  auto vae = LinearVae::random_init(vocab, {dim, t_max}, rng);
  // Nonzero log-variance weights so sigma depends on the input.
  std::normal_distribution<double> n(0.0, 0.3);
  auto& p = vae.mutable_parameters();
  for (Eigen::Index i = 0; i < p.enc_lv_w.size(); ++i) p.enc_lv_w.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < p.enc_lv_b.size(); ++i) p.enc_lv_b.data()[i] = n(rng) - 1.0;
  for (Eigen::Index i = 0; i < p.enc_mu_b.size(); ++i) p.enc_mu_b.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < p.dec_b.size(); ++i) p.dec_b.data()[i] = n(rng);
  return vae;
}

/// Delegates to another codec and counts calls.
class CountingCodec final : public SemanticCodec {
 public:
  explicit CountingCodec(const SemanticCodec& inner) : inner_(inner) {}

  std::size_t latent_dim() const override { return inner_.latent_dim(); }
  const Vocabulary& vocabulary() const override { return inner_.vocabulary(); }
  std::size_t max_len() const override { return inner_.max_len(); }

  EncoderOutput encode(const TokenizedSentence& s) const override {
    ++encodes;
    return inner_.encode(s);
  }
  TokenizedSentence decode(const LatentVector& z) const override {
    ++decodes;
    return inner_.decode(z);
  }
  TokenizedSentence decode_sampled(const LatentVector& z, double t, Rng& rng) const override {
    ++sampled_decodes;
    return inner_.decode_sampled(z, t, rng);
  }

  void reset() { encodes = decodes = sampled_decodes = 0; }
  std::size_t all_decodes() const { return decodes + sampled_decodes; }

  mutable std::size_t encodes = 0;
  mutable std::size_t decodes = 0;
  mutable std::size_t sampled_decodes = 0;

 private:
  const SemanticCodec& inner_;
};

/// Trains the default toy codec once per process on the bundled corpus with
/// a shortened schedule.
struct TrainedCodecs {
  CorpusSplit corpus;
  TrainResult result;
  LinearVae a;
  LinearVae b;
};

inline const TrainedCodecs& trained_codecs() {
  static const TrainedCodecs t = [] {
    auto all = filter_by_length(load_sentences(bundled_corpus_path()), 5, 50);
    auto corpus = split_corpus(all, {0.8, 0.1, 0.1}, 1);
    TrainingConfig cfg;
    cfg.epochs = 10;
    auto result = train(corpus, cfg);
    auto a = result.previous.model();
    auto b = result.last.model();
    return TrainedCodecs{std::move(corpus), std::move(result), std::move(a), std::move(b)};
  }();
  return t;
}

}  // namespace semharq::fixtures
