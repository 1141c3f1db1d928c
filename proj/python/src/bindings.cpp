#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "semharq/bench/cli.hpp"
#include "semharq/channel.hpp"
#include "semharq/checkpoint.hpp"
#include "semharq/combining.hpp"
#include "semharq/error.hpp"
#include "semharq/harq.hpp"
#include "semharq/linear_vae.hpp"
#include "semharq/metrics.hpp"
#include "semharq/quality.hpp"

namespace py = pybind11;
using namespace semharq;

namespace {

std::vector<ReceivedAttempt> attempts_of(const std::vector<Eigen::VectorXd>& latents,
                                         const std::vector<double>& qualities) {
  if (latents.size() != qualities.size()) {
    throw InvalidArgument("latents and qualities differ in length");
  }
  std::vector<ReceivedAttempt> out;
  for (std::size_t k = 0; k < latents.size(); ++k) {
    out.push_back({LatentVector(latents[k]), {qualities[k], QualityMetric::A}, k + 1});
  }
  return out;
}

QualityConfig quality_config(const std::string& metric, std::size_t n_passes, double temperature) {
  QualityConfig cfg;
  cfg.metric = parse_quality_metric(metric);
  cfg.n_passes = n_passes;
  cfg.temperature = temperature;
  cfg.validate();
  return cfg;
}

py::dict session_dict(const HarqSessionResult& r) {
  std::vector<double> q;
  std::vector<Eigen::VectorXd> rx;
  for (const auto& a : r.attempts) {
    q.push_back(a.quality.value);
    rx.push_back(a.latent.values);
  }
  py::dict d;
  d["n_transmissions"] = r.n_transmissions;
  d["ack_at"] = r.ack_at;
  d["qualities"] = q;
  d["received"] = rx;
  d["combined"] = r.combined.values;
  d["decoded"] = r.decoded;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semantic HARQ test bench over a stochastic latent text codec.";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<TrainingDiverged>(m, "TrainingDiverged", PyExc_RuntimeError);

  py::class_<LinearVae>(m, "Codec")
      .def_static(
          "load", [](const std::filesystem::path& p) { return load_checkpoint(p).model(); },
          py::arg("path"))
      .def_property_readonly("latent_dim", &LinearVae::latent_dim)
      .def_property_readonly("max_len", &LinearVae::max_len)
      .def_property_readonly("vocabulary",
                             [](const LinearVae& c) { return c.vocabulary().tokens(); })
      .def(
          "encode",
          [](const LinearVae& c, const std::string& text) {
            auto e = c.encode_text(text);
            return py::make_tuple(e.mu, e.log_var);
          },
          py::arg("text"), "Posterior mean and clamped log-variance.")
      .def(
          "decode", [](const LinearVae& c, const Eigen::VectorXd& z) {
            return c.decode_text(LatentVector(z));
          },
          py::arg("z"), "Greedy decode to text.");

  m.def(
      "combine",
      [](const std::vector<Eigen::VectorXd>& latents, const std::vector<double>& qualities,
         const std::string& method, const std::string& iterative_update) {
        const auto a = attempts_of(latents, qualities);
        return combine(a, {parse_combiner(method), parse_iterative_update(iterative_update)})
            .values;
      },
      py::arg("latents"), py::arg("qualities"), py::arg("method") = "weighted_avg",
      py::arg("iterative_update") = "accumulate");

  m.def("uncertainty_score", &uncertainty_score, py::arg("sigma"));
  m.def("self_consistency_score", &self_consistency_score, py::arg("mu"), py::arg("mu2"));
  m.def("latent_distance_score", &latent_distance_score, py::arg("z"), py::arg("mu"),
        py::arg("epsilon") = 1e-8);
  m.def(
      "agreement_score", [](const std::vector<std::string>& o) { return agreement_score(o); },
      py::arg("outputs"));
  m.def(
      "estimate_quality",
      [](const Eigen::VectorXd& z, const LinearVae& codec, const std::string& metric,
         std::size_t n_passes, double temperature, std::uint64_t seed) {
        Rng rng(seed);
        return estimate(LatentVector(z), quality_config(metric, n_passes, temperature), codec, rng)
            .value;
      },
      py::arg("z"), py::arg("codec"), py::arg("metric") = "B", py::arg("n_passes") = 5,
      py::arg("temperature") = 1.0, py::arg("seed") = 0);

  m.def("noise_variance", &noise_variance, py::arg("snr_db"), py::arg("p_z"));
  m.def(
      "apply_awgn",
      [](const Eigen::VectorXd& z, double variance, std::uint64_t seed) {
        Rng rng(seed);
        return apply_awgn(LatentVector(z), variance, rng).values;
      },
      py::arg("z"), py::arg("variance"), py::arg("seed") = 0);

  m.def(
      "bleu",
      [](const std::vector<std::string>& cand, const std::vector<std::string>& ref, int n,
         bool smoothing) { return bleu(cand, ref, n, smoothing).value; },
      py::arg("candidate"), py::arg("reference"), py::arg("n") = 4, py::arg("smoothing") = true);
  m.def("sentence_bleu4", &sentence_bleu4, py::arg("candidate"), py::arg("reference"));
  m.def(
      "jaccard",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return jaccard(a, b).value;
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "run_session",
      [](const std::string& sentence, const LinearVae& tx, const LinearVae& rx, double snr_db,
         double p_z, double q_th, std::size_t k_max, const std::string& metric,
         const std::string& combiner, std::uint64_t seed, std::uint64_t sentence_index,
         std::uint64_t trial) {
        HarqConfig cfg;
        cfg.q_th = q_th;
        cfg.k_max = k_max;
        cfg.quality.metric = parse_quality_metric(metric);
        cfg.combiner.method = parse_combiner(combiner);
        cfg.channel.snr_db = snr_db;
        cfg.validate();
        HarqLink link(tx, rx, cfg.channel, p_z);
        auto rng = session_rng(seed, sentence_index, trial);
        return session_dict(run_session(sentence, cfg, link, rng));
      },
      py::arg("sentence"), py::arg("tx"), py::arg("rx"), py::arg("snr_db"), py::arg("p_z"),
      py::arg("q_th") = 0.85, py::arg("k_max") = 5, py::arg("metric") = "B",
      py::arg("combiner") = "weighted_avg", py::arg("seed") = 0, py::arg("sentence_index") = 0,
      py::arg("trial") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> all{"semharq"};
        all.insert(all.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : all) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = bench::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool; returns (exit code, stdout, stderr).");
}
