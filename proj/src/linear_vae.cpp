#include "semharq/linear_vae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semharq/error.hpp"

namespace semharq {

void CodecConfig::validate() const {
  if (latent_dim < 1) throw InvalidArgument("latent_dim must be >= 1");
  if (max_decode_len < 2) throw InvalidArgument("max_decode_len must be >= 2");
}

VaeParameters VaeParameters::zeros(std::size_t vocab, std::size_t latent_dim, std::size_t t_max) {
  const auto v = static_cast<Eigen::Index>(vocab);
  const auto d = static_cast<Eigen::Index>(latent_dim);
  const auto heads = static_cast<Eigen::Index>(t_max) * v;
  VaeParameters p;
  p.enc_mu_w = Eigen::MatrixXd::Zero(d, v);
  p.enc_mu_b = Eigen::VectorXd::Zero(d);
  p.enc_lv_w = Eigen::MatrixXd::Zero(d, v);
  p.enc_lv_b = Eigen::VectorXd::Zero(d);
  p.dec_w = Eigen::MatrixXd::Zero(heads, d);
  p.dec_b = Eigen::VectorXd::Zero(heads);
  return p;
}

VaeParameters VaeParameters::zeros_like() const {
  VaeParameters p;
  p.enc_mu_w = Eigen::MatrixXd::Zero(enc_mu_w.rows(), enc_mu_w.cols());
  p.enc_mu_b = Eigen::VectorXd::Zero(enc_mu_b.size());
  p.enc_lv_w = Eigen::MatrixXd::Zero(enc_lv_w.rows(), enc_lv_w.cols());
  p.enc_lv_b = Eigen::VectorXd::Zero(enc_lv_b.size());
  p.dec_w = Eigen::MatrixXd::Zero(dec_w.rows(), dec_w.cols());
  p.dec_b = Eigen::VectorXd::Zero(dec_b.size());
  return p;
}

std::size_t VaeParameters::count() const {
  return static_cast<std::size_t>(enc_mu_w.size() + enc_mu_b.size() + enc_lv_w.size() +
                                  enc_lv_b.size() + dec_w.size() + dec_b.size());
}

double VaeParameters::squared_norm() const {
  return enc_mu_w.squaredNorm() + enc_mu_b.squaredNorm() + enc_lv_w.squaredNorm() +
         enc_lv_b.squaredNorm() + dec_w.squaredNorm() + dec_b.squaredNorm();
}

void VaeParameters::scale(double factor) {
  enc_mu_w *= factor;
  enc_mu_b *= factor;
  enc_lv_w *= factor;
  enc_lv_b *= factor;
  dec_w *= factor;
  dec_b *= factor;
}

void VaeParameters::add_scaled(const VaeParameters& other, double factor) {
  enc_mu_w += factor * other.enc_mu_w;
  enc_mu_b += factor * other.enc_mu_b;
  enc_lv_w += factor * other.enc_lv_w;
  enc_lv_b += factor * other.enc_lv_b;
  dec_w += factor * other.dec_w;
  dec_b += factor * other.dec_b;
}

void VaeParameters::for_each(
    const std::function<void(const char*, double*, std::size_t)>& fn) {
  auto n = [](const auto& m) { return static_cast<std::size_t>(m.size()); };
  fn("enc_mu_w", enc_mu_w.data(), n(enc_mu_w));
  fn("enc_mu_b", enc_mu_b.data(), n(enc_mu_b));
  fn("enc_lv_w", enc_lv_w.data(), n(enc_lv_w));
  fn("enc_lv_b", enc_lv_b.data(), n(enc_lv_b));
  fn("dec_w", dec_w.data(), n(dec_w));
  fn("dec_b", dec_b.data(), n(dec_b));
}

void VaeParameters::for_each(
    const std::function<void(const char*, const double*, std::size_t)>& fn) const {
  auto n = [](const auto& m) { return static_cast<std::size_t>(m.size()); };
  fn("enc_mu_w", enc_mu_w.data(), n(enc_mu_w));
  fn("enc_mu_b", enc_mu_b.data(), n(enc_mu_b));
  fn("enc_lv_w", enc_lv_w.data(), n(enc_lv_w));
  fn("enc_lv_b", enc_lv_b.data(), n(enc_lv_b));
  fn("dec_w", dec_w.data(), n(dec_w));
  fn("dec_b", dec_b.data(), n(dec_b));
}

bool operator==(const VaeParameters& a, const VaeParameters& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.enc_mu_w, b.enc_mu_w) && same(a.enc_mu_b, b.enc_mu_b) &&
         same(a.enc_lv_w, b.enc_lv_w) && same(a.enc_lv_b, b.enc_lv_b) &&
         same(a.dec_w, b.dec_w) && same(a.dec_b, b.dec_b);
}

LinearVae::LinearVae(Vocabulary vocab, CodecConfig config)
    : vocab_(std::move(vocab)), config_(config) {
  config_.validate();
  params_ = VaeParameters::zeros(vocab_.size(), config_.latent_dim, config_.max_decode_len);
}

LinearVae::LinearVae(Vocabulary vocab, CodecConfig config, VaeParameters params)
    : vocab_(std::move(vocab)), config_(config), params_(std::move(params)) {
  config_.validate();
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const auto d = static_cast<Eigen::Index>(config_.latent_dim);
  const auto heads = static_cast<Eigen::Index>(config_.max_decode_len) * v;
  const auto& p = params_;
  if (p.enc_mu_w.rows() != d || p.enc_mu_w.cols() != v || p.enc_mu_b.size() != d ||
      p.enc_lv_w.rows() != d || p.enc_lv_w.cols() != v || p.enc_lv_b.size() != d ||
      p.dec_w.rows() != heads || p.dec_w.cols() != d || p.dec_b.size() != heads) {
    throw DimensionMismatch("LinearVae: parameter shapes do not match vocabulary/config");
  }
}

LinearVae LinearVae::random_init(Vocabulary vocab, CodecConfig config, Rng& rng) {
  LinearVae vae(std::move(vocab), config);
  std::normal_distribution<double> normal(0.0, 0.1);
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  };
  fill(vae.params_.enc_mu_w);
  fill(vae.params_.dec_w);
  return vae;
}

std::vector<std::pair<TokenId, double>> LinearVae::pooled_input(
    const TokenizedSentence& sentence) const {
  const auto& sp = vocab_.special();
  const std::size_t n = sentence.framed_length(sp);
  if (n == 0) throw InvalidArgument("encode: empty token sequence");
  std::vector<std::pair<TokenId, double>> out;
  out.reserve(n);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TokenId id = sentence.ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_.size()) {
      throw DimensionMismatch("encode: token id " + std::to_string(id) +
                              " outside codec vocabulary");
    }
    if (id == sp.pad) continue;
    auto it = std::find_if(out.begin(), out.end(), [id](const auto& e) { return e.first == id; });
    if (it == out.end()) {
      out.emplace_back(id, w);
    } else {
      it->second += w;
    }
  }
  return out;
}

Eigen::VectorXd LinearVae::raw_log_var(const TokenizedSentence& sentence) const {
  Eigen::VectorXd lv = params_.enc_lv_b;
  for (const auto& [id, w] : pooled_input(sentence)) lv.noalias() += w * params_.enc_lv_w.col(id);
  return lv;
}

EncoderOutput LinearVae::encode(const TokenizedSentence& sentence) const {
  EncoderOutput out;
  out.mu = params_.enc_mu_b;
  out.log_var = params_.enc_lv_b;
  for (const auto& [id, w] : pooled_input(sentence)) {
    out.mu.noalias() += w * params_.enc_mu_w.col(id);
    out.log_var.noalias() += w * params_.enc_lv_w.col(id);
  }
  out.log_var = out.log_var.cwiseMax(kLogVarMin).cwiseMin(kLogVarMax);
  return out;
}

void LinearVae::check_latent(const LatentVector& z) const {
  if (z.dim() != config_.latent_dim) {
    throw DimensionMismatch("decode: latent has dimension " + std::to_string(z.dim()) +
                            ", codec expects " + std::to_string(config_.latent_dim));
  }
  if (!z.finite()) throw InvalidArgument("decode: latent has non-finite components");
}

Eigen::VectorXd LinearVae::head_logits(const LatentVector& z, std::size_t position) const {
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const auto start = static_cast<Eigen::Index>(position) * v;
  return params_.dec_w.middleRows(start, v) * z.values + params_.dec_b.segment(start, v);
}

Eigen::MatrixXd LinearVae::logits(const LatentVector& z) const {
  check_latent(z);
  const auto v = static_cast<Eigen::Index>(vocab_.size());
  const auto t_max = static_cast<Eigen::Index>(config_.max_decode_len);
  Eigen::VectorXd flat = params_.dec_w * z.values + params_.dec_b;
  // Row-major reinterpretation: row t holds head t's V logits.
  Eigen::MatrixXd out(t_max, v);
  for (Eigen::Index t = 0; t < t_max; ++t) out.row(t) = flat.segment(t * v, v).transpose();
  return out;
}

template <typename Pick>
TokenizedSentence LinearVae::generate(const LatentVector& z, Pick&& pick) const {
  check_latent(z);
  const auto& sp = vocab_.special();
  TokenizedSentence out;
  out.ids.reserve(config_.max_decode_len + 2);
  out.ids.push_back(sp.bos);
  for (std::size_t t = 0; t < config_.max_decode_len; ++t) {
    Eigen::VectorXd l = head_logits(z, t);
    l[sp.bos] = -std::numeric_limits<double>::infinity();
    l[sp.pad] = -std::numeric_limits<double>::infinity();
    const TokenId next = pick(l);
    out.ids.push_back(next);
    if (next == sp.eos) return out;
  }
  out.ids.push_back(sp.eos);
  return out;
}

TokenizedSentence LinearVae::decode(const LatentVector& z) const {
  return generate(z, [](const Eigen::VectorXd& l) {
    Eigen::Index best = 0;
    l.maxCoeff(&best);
    return static_cast<TokenId>(best);
  });
}

TokenizedSentence LinearVae::decode_sampled(const LatentVector& z, double temperature,
                                            Rng& rng) const {
  if (temperature <= 0.0) return decode(z);
  return generate(z, [&](const Eigen::VectorXd& l) {
    const double max = l.maxCoeff();
    Eigen::VectorXd p = ((l.array() - max) / temperature).exp().matrix();
    double u = std::uniform_real_distribution<double>(0.0, p.sum())(rng);
    Eigen::Index last = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      last = i;
      if (u < p[i]) return static_cast<TokenId>(i);
      u -= p[i];
    }
    return static_cast<TokenId>(last);
  });
}

}  // namespace semharq
