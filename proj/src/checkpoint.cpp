#include "semharq/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semharq/error.hpp"

namespace semharq {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

json vector_to_json(const Eigen::VectorXd& v) {
  return {{"shape", {v.size()}}, {"data", std::vector<double>(v.data(), v.data() + v.size())}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* name, Eigen::Index rows,
                                 Eigen::Index cols) {
  const auto shape = j.at("shape").get<std::vector<Eigen::Index>>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (shape.size() != 2 || shape[0] != rows || shape[1] != cols) {
    throw DimensionMismatch(std::string("checkpoint: ") + name + " shape disagrees with config");
  }
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DimensionMismatch(std::string("checkpoint: ") + name + " data length disagrees with shape");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const char* name, Eigen::Index size) {
  const auto shape = j.at("shape").get<std::vector<Eigen::Index>>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (shape.size() != 1 || shape[0] != size) {
    throw DimensionMismatch(std::string("checkpoint: ") + name + " shape disagrees with config");
  }
  if (static_cast<Eigen::Index>(data.size()) != size) {
    throw DimensionMismatch(std::string("checkpoint: ") + name + " data length disagrees with shape");
  }
  return Eigen::Map<const Eigen::VectorXd>(data.data(), size);
}

}  // namespace

Checkpoint Checkpoint::from_model(const LinearVae& model, std::size_t epoch, double bleu4,
                                  double similarity) {
  Checkpoint c;
  c.vocab = model.vocabulary();
  c.config = model.config();
  c.params = model.parameters();
  c.epoch = epoch;
  c.validation_bleu4 = bleu4;
  c.validation_similarity = similarity;
  return c;
}

LinearVae Checkpoint::model() const { return LinearVae(vocab, config, params); }

std::string checkpoint_to_json(const Checkpoint& c) {
  json j;
  j["version"] = c.version;
  j["model"] = "linear-vae";
  j["config"] = {{"latent_dim", c.config.latent_dim},
                 {"max_decode_len", c.config.max_decode_len},
                 {"vocab_size", c.vocab.size()}};
  j["vocab"] = json::parse(c.vocab.to_json());
  j["epoch"] = c.epoch;
  j["validation"] = {{"bleu4", c.validation_bleu4}, {"similarity", c.validation_similarity}};
  j["params"] = {{"enc_mu_w", matrix_to_json(c.params.enc_mu_w)},
                 {"enc_mu_b", vector_to_json(c.params.enc_mu_b)},
                 {"enc_lv_w", matrix_to_json(c.params.enc_lv_w)},
                 {"enc_lv_b", vector_to_json(c.params.enc_lv_b)},
                 {"dec_w", matrix_to_json(c.params.dec_w)},
                 {"dec_b", vector_to_json(c.params.dec_b)}};
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupt checkpoint: ") + e.what());
  }
  try {
    Checkpoint c;
    c.version = j.at("version").get<int>();
    if (c.version != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " + std::to_string(c.version));
    }
    const auto& cfg = j.at("config");
    c.config.latent_dim = cfg.at("latent_dim").get<std::size_t>();
    c.config.max_decode_len = cfg.at("max_decode_len").get<std::size_t>();
    c.config.validate();
    c.vocab = Vocabulary::from_json(j.at("vocab").dump());
    if (cfg.at("vocab_size").get<std::size_t>() != c.vocab.size()) {
      throw DimensionMismatch("checkpoint: vocab_size disagrees with stored vocabulary");
    }
    c.epoch = j.at("epoch").get<std::size_t>();
    c.validation_bleu4 = j.at("validation").at("bleu4").get<double>();
    c.validation_similarity = j.at("validation").at("similarity").get<double>();

    const auto d = static_cast<Eigen::Index>(c.config.latent_dim);
    const auto v = static_cast<Eigen::Index>(c.vocab.size());
    const auto heads = static_cast<Eigen::Index>(c.config.max_decode_len) * v;
    const auto& p = j.at("params");
    c.params.enc_mu_w = matrix_from_json(p.at("enc_mu_w"), "enc_mu_w", d, v);
    c.params.enc_mu_b = vector_from_json(p.at("enc_mu_b"), "enc_mu_b", d);
    c.params.enc_lv_w = matrix_from_json(p.at("enc_lv_w"), "enc_lv_w", d, v);
    c.params.enc_lv_b = vector_from_json(p.at("enc_lv_b"), "enc_lv_b", d);
    c.params.dec_w = matrix_from_json(p.at("dec_w"), "dec_w", heads, d);
    c.params.dec_b = vector_from_json(p.at("dec_b"), "dec_b", heads);
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupt checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(c) << '\n';
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read checkpoint " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace semharq
