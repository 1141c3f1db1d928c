#include "semharq/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "semharq/channel.hpp"
#include "semharq/error.hpp"
#include "semharq/metrics.hpp"

namespace semharq {

TrainingConfig TrainingConfig::large_scale_preset() {
  TrainingConfig cfg;
  cfg.epochs = 50;
  cfg.patience = 15;
  cfg.learning_rate = 1e-4;
  cfg.batch_size = 16;
  cfg.beta_start = 0.01;
  cfg.beta_end = 1.0;
  cfg.anneal_epochs = 25;
  cfg.free_bits = 0.25;
  cfg.kl_convention = KlConvention::literal;
  cfg.snr_set_db.clear();
  for (int s = 0; s <= 20; ++s) cfg.snr_set_db.push_back(s);
  cfg.word_dropout = 0.5;
  cfg.label_smoothing = 0.1;
  cfg.vocab_size = 10000;
  cfg.codec.latent_dim = 256;
  cfg.codec.max_decode_len = 63;
  return cfg;
}

void TrainingConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("training: epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("training: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("training: learning_rate must be > 0");
  if (beta_start > beta_end) throw InvalidArgument("training: beta_start must be <= beta_end");
  if (free_bits < 0.0) throw InvalidArgument("training: free_bits must be >= 0");
  if (snr_set_db.empty()) throw InvalidArgument("training: snr_set must be nonempty");
  if (label_smoothing < 0.0 || label_smoothing >= 1.0) {
    throw InvalidArgument("training: label_smoothing must be in [0, 1)");
  }
  if (vocab_size < 5) throw InvalidArgument("training: vocab_size must be >= 5");
  codec.validate();
}

double TrainingConfig::beta_at(std::size_t epoch) const {
  if (anneal_epochs == 0) return beta_end;
  const double progress =
      std::min(1.0, static_cast<double>(epoch > 0 ? epoch - 1 : 0) / static_cast<double>(anneal_epochs));
  return beta_start + (beta_end - beta_start) * progress;
}

LossBreakdown batch_objective(const LinearVae& model, std::span<const TokenizedSentence> batch,
                              std::span<const SentenceNoise> noise,
                              const ObjectiveSettings& settings, VaeParameters* gradient) {
  if (batch.empty()) throw InvalidArgument("batch_objective: empty batch");
  if (noise.size() != batch.size()) {
    throw DimensionMismatch("batch_objective: one noise draw per sentence required");
  }
  const auto& p = model.parameters();
  const auto& sp = model.vocabulary().special();
  const auto vocab = static_cast<Eigen::Index>(model.vocabulary().size());
  const auto dim = static_cast<Eigen::Index>(model.latent_dim());
  const double n_sent = static_cast<double>(batch.size());
  const double ls = settings.label_smoothing;
  const double off = ls / static_cast<double>(vocab);

  std::size_t n_positions = 0;
  for (const auto& s : batch) {
    const std::size_t framed = s.framed_length(sp);
    if (framed < 2) throw DimensionMismatch("batch_objective: sentence without target positions");
    if (framed - 1 > model.config().max_decode_len) {
      throw DimensionMismatch("batch_objective: sentence longer than decoder heads");
    }
    n_positions += framed - 1;
  }
  const double inv_positions = 1.0 / static_cast<double>(n_positions);

  if (gradient) *gradient = p.zeros_like();

  double recon_sum = 0.0;
  double kl_sum = 0.0;
  Eigen::VectorXd logits(vocab);
  Eigen::VectorXd g(vocab);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& sentence = batch[i];
    const auto& nz = noise[i];
    if (nz.eps.size() != dim || nz.channel.size() != dim) {
      throw DimensionMismatch("batch_objective: noise has wrong dimension");
    }
    const auto pooled = model.pooled_input(sentence);
    Eigen::VectorXd mu = p.enc_mu_b;
    Eigen::VectorXd lv_raw = p.enc_lv_b;
    for (const auto& [id, w] : pooled) {
      mu.noalias() += w * p.enc_mu_w.col(id);
      lv_raw.noalias() += w * p.enc_lv_w.col(id);
    }
    const Eigen::VectorXd lv = lv_raw.cwiseMax(kLogVarMin).cwiseMin(kLogVarMax);
    const Eigen::VectorXd sd = (0.5 * lv.array()).exp().matrix();
    const Eigen::VectorXd z = mu + sd.cwiseProduct(nz.eps) + nz.channel;

    Eigen::VectorXd dz = Eigen::VectorXd::Zero(dim);
    const std::size_t positions = sentence.framed_length(sp) - 1;
    for (std::size_t t = 0; t < positions; ++t) {
      const Eigen::Index row0 = static_cast<Eigen::Index>(t) * vocab;
      const auto head = p.dec_w.middleRows(row0, vocab);
      logits.noalias() = head * z;
      logits += p.dec_b.segment(row0, vocab);
      const TokenId y = sentence.ids[t + 1];
      const double max = logits.maxCoeff();
      const double sum_exp = (logits.array() - max).exp().sum();
      const double log_z = max + std::log(sum_exp);
      recon_sum += -(1.0 - ls) * (logits[y] - log_z) -
                   off * (logits.sum() - static_cast<double>(vocab) * log_z);
      if (!gradient) continue;
      g = (logits.array() - log_z).exp().matrix();
      g.array() -= off;
      g[y] -= 1.0 - ls;
      g *= inv_positions;
      gradient->dec_w.middleRows(row0, vocab).noalias() += g * z.transpose();
      gradient->dec_b.segment(row0, vocab) += g;
      dz.noalias() += head.transpose() * g;
    }

    EncoderOutput post{mu, lv};
    kl_sum += kl_free_bits(post, settings.lambda_free, settings.convention);
    if (!gradient) continue;

    Eigen::VectorXd dmu = dz;
    Eigen::VectorXd dlv = dz.cwiseProduct(nz.eps).cwiseProduct(0.5 * sd);
    const double kl_weight = settings.beta / n_sent;
    for (Eigen::Index d = 0; d < dim; ++d) {
      const double var = std::exp(lv[d]);
      const double inner = 1.0 + lv[d] - mu[d] * mu[d] - var;
      const bool active = settings.convention == KlConvention::literal
                              ? inner > settings.lambda_free
                              : -0.5 * inner > settings.lambda_free;
      if (active) {
        dmu[d] += kl_weight * mu[d];
        dlv[d] += kl_weight * 0.5 * (var - 1.0);
      }
      if (!(lv_raw[d] > kLogVarMin && lv_raw[d] < kLogVarMax)) dlv[d] = 0.0;
    }
    for (const auto& [id, w] : pooled) {
      gradient->enc_mu_w.col(id) += w * dmu;
      gradient->enc_lv_w.col(id) += w * dlv;
    }
    gradient->enc_mu_b += dmu;
    gradient->enc_lv_b += dlv;
  }

  LossBreakdown out;
  out.recon = recon_sum * inv_positions;
  out.kl = kl_sum / n_sent;
  out.beta = settings.beta;
  out.total = out.recon + settings.beta * out.kl;
  return out;
}

AdamOptimizer::AdamOptimizer(const VaeParameters& shape, double beta1, double beta2, double eps)
    : m_(shape.zeros_like()), v_(shape.zeros_like()), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(VaeParameters& params, const VaeParameters& gradient,
                         double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](auto& w, const auto& g, auto& m, auto& v) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    w.array() -= learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  };
  update(params.enc_mu_w, gradient.enc_mu_w, m_.enc_mu_w, v_.enc_mu_w);
  update(params.enc_mu_b, gradient.enc_mu_b, m_.enc_mu_b, v_.enc_mu_b);
  update(params.enc_lv_w, gradient.enc_lv_w, m_.enc_lv_w, v_.enc_lv_w);
  update(params.enc_lv_b, gradient.enc_lv_b, m_.enc_lv_b, v_.enc_lv_b);
  update(params.dec_w, gradient.dec_w, m_.dec_w, v_.dec_w);
  update(params.dec_b, gradient.dec_b, m_.dec_b, v_.dec_b);
}

double clip_gradient_norm(VaeParameters& gradient, double max_norm) {
  const double norm = std::sqrt(gradient.squared_norm());
  if (max_norm > 0.0 && norm > max_norm) gradient.scale(max_norm / norm);
  return norm;
}

ValidationMetrics evaluate_reconstruction(const SemanticCodec& codec,
                                          std::span<const std::string> sentences,
                                          std::uint64_t seed) {
  ValidationMetrics out;
  if (sentences.empty()) return out;
  Rng rng(seed);
  for (const auto& s : sentences) {
    const auto post = codec.encode_text(s);
    const auto decoded = codec.decode(sample_latent(post, rng));
    const std::string text = codec.detokenize(decoded);
    out.bleu4 += sentence_bleu4(text, s);
    out.similarity += cosine(post.mu, codec.encode(decoded).mu);
  }
  out.bleu4 /= static_cast<double>(sentences.size());
  out.similarity /= static_cast<double>(sentences.size());
  return out;
}

std::string TrainingManifest::to_json() const {
  nlohmann::json j;
  j["config"] = {{"epochs", config.epochs},
                 {"patience", config.patience},
                 {"learning_rate", config.learning_rate},
                 {"batch_size", config.batch_size},
                 {"beta_start", config.beta_start},
                 {"beta_end", config.beta_end},
                 {"anneal_epochs", config.anneal_epochs},
                 {"free_bits", config.free_bits},
                 {"kl_convention", to_string(config.kl_convention)},
                 {"snr_set_db", config.snr_set_db},
                 {"grad_clip", config.grad_clip},
                 {"word_dropout", config.word_dropout},
                 {"label_smoothing", config.label_smoothing},
                 {"seed", config.seed},
                 {"vocab_size", config.vocab_size},
                 {"latent_dim", config.codec.latent_dim},
                 {"max_decode_len", config.codec.max_decode_len}};
  j["notes"] = {
      {"optimizer", "adam (bias-corrected, no weight decay), global-norm gradient clipping"},
      {"word_dropout", "no-op: the decoder has no token input path; value recorded only"},
      {"lr_schedule", "halve after ceil(patience/3) epochs without validation improvement"},
      {"selection_metric", "validation bleu4 of decode(sample_latent(encode(s)))"},
      {"similarity", "cosine of encoder means (source vs. reconstruction) under the trained codec"},
      {"awgn", "per batch: snr drawn from snr_set, p_z estimated on the batch latents"}};
  j["untrained_val_bleu4"] = untrained_val_bleu4;
  j["best_epoch"] = best_epoch;
  j["stopped_early"] = stopped_early;
  auto& rows = j["epochs"] = nlohmann::json::array();
  for (const auto& e : epochs) {
    rows.push_back({{"epoch", e.epoch},
                    {"beta", e.beta},
                    {"learning_rate", e.learning_rate},
                    {"train_recon", e.train_recon},
                    {"train_kl", e.train_kl},
                    {"train_total", e.train_total},
                    {"val_bleu4", e.val_bleu4},
                    {"val_similarity", e.val_similarity},
                    {"improved", e.improved}});
  }
  return j.dump(2);
}

TrainResult train(const CorpusSplit& corpus, const TrainingConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  if (corpus.train.empty() || corpus.validation.empty()) {
    throw InvalidArgument("train: train and validation splits must be nonempty");
  }
  Rng rng(derive_seed(cfg.seed, 0x7a1));
  const std::uint64_t eval_seed = derive_seed(cfg.seed, 0xe7a1);

  LinearVae model = LinearVae::random_init(build_vocab(corpus.train, cfg.vocab_size), cfg.codec, rng);
  std::vector<TokenizedSentence> data;
  data.reserve(corpus.train.size());
  for (const auto& s : corpus.train) data.push_back(tokenize(s, model.vocabulary(), model.max_len()));

  TrainResult result;
  result.manifest.config = cfg;
  const auto initial = evaluate_reconstruction(model, corpus.validation, eval_seed);
  result.manifest.untrained_val_bleu4 = initial.bleu4;
  result.last = Checkpoint::from_model(model, 0, initial.bleu4, initial.similarity);
  result.previous = result.last;
  result.best = result.last;

  const ObjectiveSettings base{0.0, cfg.free_bits, cfg.label_smoothing, cfg.kl_convention};
  AdamOptimizer adam(model.parameters());
  const auto dim = static_cast<Eigen::Index>(cfg.codec.latent_dim);
  double lr = cfg.learning_rate;
  double best_metric = -std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  std::size_t plateau = 0;
  const std::size_t plateau_limit = std::max<std::size_t>(1, (cfg.patience + 2) / 3);
  const std::size_t stop_limit = std::max<std::size_t>(1, cfg.patience);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  VaeParameters grad;
  std::vector<TokenizedSentence> batch;
  std::vector<SentenceNoise> noise;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    ObjectiveSettings settings = base;
    settings.beta = cfg.beta_at(epoch);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }

    double sum_recon = 0.0, sum_kl = 0.0, sum_total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      noise.clear();
      const double snr = cfg.snr_set_db[static_cast<std::size_t>(rng() % cfg.snr_set_db.size())];
      double power = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(data[order[k]]);
        SentenceNoise nz;
        nz.eps.resize(dim);
        for (Eigen::Index d = 0; d < dim; ++d) nz.eps[d] = standard_normal(rng);
        const auto post = model.encode(batch.back());
        power += (post.mu + post.sigma().cwiseProduct(nz.eps)).squaredNorm() /
                 static_cast<double>(dim);
        noise.push_back(std::move(nz));
      }
      power /= static_cast<double>(batch.size());
      const double sd = power > 0.0 ? std::sqrt(noise_variance(snr, power)) : 0.0;
      for (auto& nz : noise) {
        nz.channel.resize(dim);
        for (Eigen::Index d = 0; d < dim; ++d) nz.channel[d] = sd * standard_normal(rng);
      }

      const auto l = batch_objective(model, batch, noise, settings, &grad);
      if (!std::isfinite(l.total)) {
        throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) +
                               ", batch " + std::to_string(batches) +
                               ": loss = " + std::to_string(l.total) +
                               " (recon " + std::to_string(l.recon) + ", kl " +
                               std::to_string(l.kl) + ")");
      }
      clip_gradient_norm(grad, cfg.grad_clip);
      adam.step(model.mutable_parameters(), grad, lr);
      sum_recon += l.recon;
      sum_kl += l.kl;
      sum_total += l.total;
      ++batches;
    }

    const auto val = evaluate_reconstruction(model, corpus.validation, eval_seed);
    EpochLog log;
    log.epoch = epoch;
    log.beta = settings.beta;
    log.learning_rate = lr;
    log.train_recon = sum_recon / static_cast<double>(batches);
    log.train_kl = sum_kl / static_cast<double>(batches);
    log.train_total = sum_total / static_cast<double>(batches);
    log.val_bleu4 = val.bleu4;
    log.val_similarity = val.similarity;
    log.improved = val.bleu4 > best_metric;

    result.previous = std::move(result.last);
    result.last = Checkpoint::from_model(model, epoch, val.bleu4, val.similarity);
    if (log.improved) {
      best_metric = val.bleu4;
      stalled = 0;
      plateau = 0;
      result.best = result.last;
      result.manifest.best_epoch = epoch;
    } else {
      ++stalled;
      if (++plateau >= plateau_limit) {
        lr *= 0.5;
        plateau = 0;
      }
    }
    result.manifest.epochs.push_back(log);
    if (on_epoch) on_epoch(log);
    if (stalled >= stop_limit) {
      result.manifest.stopped_early = epoch < cfg.epochs;
      break;
    }
  }
  return result;
}

}  // namespace semharq
