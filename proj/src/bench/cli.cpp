#include "semharq/bench/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "semharq/bench/config.hpp"
#include "semharq/bench/experiment.hpp"
#include "semharq/bench/report.hpp"
#include "semharq/checkpoint.hpp"
#include "semharq/error.hpp"
#include "semharq/metrics.hpp"
#include "semharq/number_format.hpp"
#include "semharq/training.hpp"

namespace semharq::bench {

namespace {

/// Bad flags or configuration; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;

  std::optional<std::string> scenario;
  std::optional<std::string> k;
  std::optional<std::string> snr;
  std::optional<std::string> thresholds;
  std::optional<std::string> metric;
  std::optional<std::string> metrics;
  std::optional<std::string> combiners;
  std::optional<std::string> combiner;
  std::optional<std::size_t> sentences;
  std::optional<std::size_t> trials;
  std::optional<double> q_th;
  std::optional<std::size_t> k_max;
  std::optional<std::string> checkpoint_a;
  std::optional<std::string> checkpoint_b;
  std::optional<std::string> corpus;
  std::optional<std::size_t> epochs;

  std::string sentence;
  std::size_t trial = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void add_run_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--sentences", f.sentences, "Test sentences per cell");
  cmd->add_option("--trials", f.trials, "Trials per sentence");
  cmd->add_option("--checkpoint-a", f.checkpoint_a, "Codec-A checkpoint (default <out>/codec_a.json)");
  cmd->add_option("--checkpoint-b", f.checkpoint_b, "Codec-B checkpoint (default <out>/codec_b.json)");
  cmd->add_option("--corpus", f.corpus, "Corpus file, one sentence per line");
}

ExperimentPlan build_plan(ExperimentKind kind, const Flags& f) {
  try {
    Scenario scenario = Scenario::aligned;
    if (f.scenario) scenario = parse_scenario(*f.scenario);
    ExperimentPlan plan = ExperimentPlan::defaults(kind, scenario);
    if (!f.config.empty()) apply_config(plan, ConfigFile::load(f.config));
    if (f.scenario) {
      plan.scenario = scenario;
      if (kind == ExperimentKind::ik_sweep && !f.snr) {
        plan.snr_db = {scenario == Scenario::aligned ? 0.0 : std::numeric_limits<double>::infinity()};
      }
    }
    if (f.seed) plan.seed = *f.seed;
    if (f.k) {
      plan.k_values.clear();
      for (double k : parse_number_list(*f.k)) plan.k_values.push_back(parse_count(format_double(k)));
    }
    if (f.snr) plan.snr_db = parse_number_list(*f.snr);
    if (f.thresholds) plan.thresholds = parse_number_list(*f.thresholds);
    if (f.metric) plan.harq.quality.metric = parse_quality_metric(*f.metric);
    if (f.metrics) {
      plan.metrics.clear();
      for (const auto& m : parse_word_list(*f.metrics)) plan.metrics.push_back(parse_quality_metric(m));
    }
    if (f.combiners) {
      plan.combiners.clear();
      for (const auto& c : parse_word_list(*f.combiners)) plan.combiners.push_back(parse_combiner(c));
    }
    if (f.combiner) plan.harq.combiner.method = parse_combiner(*f.combiner);
    if (f.sentences) plan.n_sentences = *f.sentences;
    if (f.trials) plan.n_trials = *f.trials;
    if (f.q_th) plan.harq.q_th = *f.q_th;
    if (f.k_max) plan.harq.k_max = *f.k_max;
    if (f.checkpoint_a) plan.checkpoint_a = *f.checkpoint_a;
    if (f.checkpoint_b) plan.checkpoint_b = *f.checkpoint_b;
    if (f.corpus) plan.corpus.path = *f.corpus;
    if (f.epochs) plan.training.epochs = *f.epochs;
    plan.out_dir = resolve_out_dir(f.out, plan.out_dir);
    plan.validate();
    plan.training.validate();
    return plan;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

TrainResult run_training(const ExperimentPlan& plan, std::ostream& out) {
  const auto corpus = load_corpus(plan.corpus);
  out << "corpus: " << corpus.train.size() << " train / " << corpus.validation.size()
      << " validation / " << corpus.test.size() << " test sentences\n";
  const auto t0 = std::chrono::steady_clock::now();
  auto result = train(corpus, plan.training, [&](const EpochLog& e) {
    out << "epoch " << std::setw(3) << e.epoch << "  beta " << std::fixed << std::setprecision(3)
        << e.beta << "  lr " << std::setprecision(5) << e.learning_rate << "  recon "
        << std::setprecision(4) << e.train_recon << "  kl " << e.train_kl << "  val_bleu4 "
        << e.val_bleu4 << "  val_sim " << e.val_similarity << (e.improved ? "  *" : "") << '\n'
        << std::defaultfloat;
  });
  const auto& dir = plan.out_dir;
  std::filesystem::create_directories(dir);
  save_checkpoint(result.previous, dir / "codec_a.json");
  save_checkpoint(result.last, dir / "codec_b.json");
  save_checkpoint(result.best, dir / "codec_best.json");
  result.last.vocab.save(dir / "vocab.json");
  write_text(dir / "train_manifest.json", result.manifest.to_json() + "\n");
  out << "untrained val_bleu4 " << format_double(result.manifest.untrained_val_bleu4)
      << ", best val_bleu4 " << format_double(result.best.validation_bleu4) << " at epoch "
      << result.best.epoch << " (" << std::fixed << std::setprecision(1) << seconds_since(t0)
      << " s)\n"
      << std::defaultfloat;
  out << "Codec-A = epoch " << result.previous.epoch << ", Codec-B = epoch " << result.last.epoch
      << "; checkpoints in " << dir.string() << '\n';
  return result;
}

std::pair<Checkpoint, Checkpoint> load_codecs(const ExperimentPlan& plan) {
  const auto a = plan.checkpoint_a.empty() ? plan.out_dir / "codec_a.json" : plan.checkpoint_a;
  const auto b = plan.checkpoint_b.empty() ? plan.out_dir / "codec_b.json" : plan.checkpoint_b;
  for (const auto& p : {a, b}) {
    if (!std::filesystem::exists(p)) {
      throw Error("missing checkpoint " + p.string() +
                  " (run `semharq train` first or pass --checkpoint-a/--checkpoint-b)");
    }
  }
  return {load_checkpoint(a), load_checkpoint(b)};
}

void run_and_write(const ExperimentPlan& plan, const BenchContext& ctx, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_sweep(plan, ctx);
  const auto stem = default_stem(result);
  const auto files = write_sweep(result, plan.out_dir, stem);
  out << stem << ": " << result.rows.size() << " cells, " << result.sessions.size()
      << " sessions in " << std::fixed << std::setprecision(1) << seconds_since(t0) << " s\n"
      << std::defaultfloat;
  for (const auto& f : files) out << "  wrote " << f.string() << '\n';
  if (plan.kind == ExperimentKind::quality_threshold_sweep) {
    for (const auto& d : dynamic_range(result)) {
      out << "  dynamic range " << d.metric << ": " << format_double(d.range()) << '\n';
    }
  }
}

void run_session_command(const ExperimentPlan& plan, const Flags& f, std::ostream& out) {
  const auto [a, b] = load_codecs(plan);
  const LinearVae tx = a.model();
  const LinearVae rx_b = b.model();
  const bool misaligned = plan.scenario == Scenario::misaligned;
  const LinearVae& rx = misaligned ? rx_b : tx;

  const double p_z = make_context(plan, a, b, load_corpus(plan.corpus)).p_z;

  HarqConfig cfg = plan.harq;
  cfg.channel.snr_db = plan.snr_db.front();
  if (misaligned && cfg.channel.bias_mode == BiasMode::none) {
    cfg.channel.bias_mode = BiasMode::misaligned_codec;
  }
  const HarqLink link(tx, rx, cfg.channel, p_z);
  Rng rng = session_rng(plan.seed, 0, f.trial);
  const auto result = run_session(f.sentence, cfg, link, rng);

  out << "sentence: " << f.sentence << '\n'
      << "scenario " << to_string(plan.scenario) << ", snr " << format_double(cfg.channel.snr_db)
      << " dB, metric " << to_string(cfg.quality.metric) << ", combiner "
      << to_string(cfg.combiner.method) << ", q_th " << format_double(cfg.q_th) << ", k_max "
      << cfg.k_max << ", p_z " << format_double(p_z) << '\n';
  for (const auto& att : result.attempts) {
    const bool ack = result.ack_at && *result.ack_at == att.index;
    out << "attempt " << att.index << ": q_" << att.index << " = " << std::fixed
        << std::setprecision(4) << att.quality.value << std::defaultfloat
        << (ack ? "  ACK" : "  NACK") << "  rx: " << rx.decode_text(att.latent) << '\n';
  }
  out << "combined " << result.n_transmissions << " attempt(s): " << result.decoded << '\n'
      << "bleu4 " << std::fixed << std::setprecision(4)
      << sentence_bleu4(result.decoded, f.sentence) << ", similarity "
      << cosine(rx.encode_text(f.sentence).mu, rx.encode_text(result.decoded).mu) << '\n'
      << std::defaultfloat;
}

void run_suite(const Flags& f, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentPlan base = build_plan(ExperimentKind::train, f);
  const auto trained = run_training(base, out);
  const auto corpus = load_corpus(base.corpus);

  std::vector<ExperimentPlan> plans;
  for (auto [kind, scenario] :
       {std::pair{ExperimentKind::ik_sweep, Scenario::aligned},
        std::pair{ExperimentKind::ik_sweep, Scenario::misaligned},
        std::pair{ExperimentKind::combining_sweep, Scenario::misaligned},
        std::pair{ExperimentKind::quality_snr_sweep, Scenario::misaligned},
        std::pair{ExperimentKind::quality_threshold_sweep, Scenario::misaligned}}) {
    Flags g = f;
    g.scenario = to_string(scenario);
    plans.push_back(build_plan(kind, g));
  }
  const BenchContext ctx = make_context(plans.front(), trained.previous, trained.last, corpus);
  for (const auto& plan : plans) run_and_write(plan, ctx, out);
  out << "suite finished in " << std::fixed << std::setprecision(1) << seconds_since(t0) << " s\n"
      << std::defaultfloat;
}

}  // namespace

std::filesystem::path resolve_out_dir(const std::filesystem::path& flag,
                                      const std::filesystem::path& configured) {
  if (!flag.empty()) return flag;
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("SEMHARQ_OUT"); env && *env) return env;
  return "semharq_out";
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic HARQ test bench over a stochastic latent-space text codec", "semharq"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "Flat key = value configuration file");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--out", f.out, "Output directory (default $SEMHARQ_OUT or ./semharq_out)");

  auto* train_cmd = app.add_subcommand("train", "Train the codec and write Codec-A/Codec-B");
  train_cmd->add_option("--epochs", f.epochs, "Maximum epochs");
  train_cmd->add_option("--corpus", f.corpus, "Corpus file, one sentence per line");

  auto* ik = app.add_subcommand("ik-sweep", "Forced-K sweep over combiners");
  ik->add_option("--scenario", f.scenario, "aligned | misaligned");
  ik->add_option("--k", f.k, "K values, e.g. 1..5");
  ik->add_option("--snr", f.snr, "SNR in dB (aligned default 0, misaligned inf)");
  ik->add_option("--metric", f.metric, "Quality metric feeding the combiners (A-F)");
  ik->add_option("--combiners", f.combiners, "Comma-separated combiners");
  add_run_options(ik, f);

  auto* comb = app.add_subcommand("combining-sweep", "Misaligned K=5 sweep over SNR");
  comb->add_option("--snr", f.snr, "SNR axis, e.g. -9..9:3");
  comb->add_option("--k", f.k, "Forced attempts (largest value is used)");
  comb->add_option("--metric", f.metric, "Quality metric feeding the combiners (A-F)");
  comb->add_option("--combiners", f.combiners, "Comma-separated combiners");
  add_run_options(comb, f);

  auto* qsnr = app.add_subcommand("quality-snr-sweep", "Closed loop per metric over SNR");
  qsnr->add_option("--snr", f.snr, "SNR axis, e.g. -9..9:3");
  qsnr->add_option("--metrics", f.metrics, "Comma-separated metrics (A-F)");
  qsnr->add_option("--q-th", f.q_th, "Quality threshold");
  qsnr->add_option("--k-max", f.k_max, "Maximum attempts");
  qsnr->add_option("--combiner", f.combiner, "Combiner");
  add_run_options(qsnr, f);

  auto* qth = app.add_subcommand("quality-threshold-sweep", "Closed loop per metric over q_th");
  qth->add_option("--thresholds", f.thresholds, "Threshold axis, e.g. 0.1..0.9:0.1");
  qth->add_option("--snr", f.snr, "SNR in dB");
  qth->add_option("--metrics", f.metrics, "Comma-separated metrics (A-F)");
  qth->add_option("--k-max", f.k_max, "Maximum attempts");
  qth->add_option("--combiner", f.combiner, "Combiner");
  add_run_options(qth, f);

  auto* session = app.add_subcommand("session", "Trace one closed-loop HARQ session");
  session->add_option("--sentence", f.sentence, "Source sentence")->required();
  session->add_option("--snr", f.snr, "SNR in dB (default 0)");
  session->add_option("--metric", f.metric, "Quality metric (A-F)");
  session->add_option("--combiner", f.combiner, "Combiner");
  session->add_option("--q-th", f.q_th, "Quality threshold");
  session->add_option("--k-max", f.k_max, "Maximum attempts");
  session->add_option("--scenario", f.scenario, "aligned | misaligned (default misaligned)");
  session->add_option("--trial", f.trial, "Trial index selecting the random stream");
  session->add_option("--checkpoint-a", f.checkpoint_a, "Codec-A checkpoint");
  session->add_option("--checkpoint-b", f.checkpoint_b, "Codec-B checkpoint");
  session->add_option("--corpus", f.corpus, "Corpus used to measure P_z");

  auto* suite = app.add_subcommand("suite", "Train, then run every default sweep");
  suite->add_option("--epochs", f.epochs, "Maximum epochs");
  suite->add_option("--sentences", f.sentences, "Test sentences per cell");
  suite->add_option("--trials", f.trials, "Trials per sentence");
  suite->add_option("--corpus", f.corpus, "Corpus file, one sentence per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      run_training(build_plan(ExperimentKind::train, f), out);
    } else if (session->parsed()) {
      Flags g = f;
      if (!g.scenario) g.scenario = "misaligned";
      if (!g.snr) g.snr = "0";
      run_session_command(build_plan(ExperimentKind::train, g), f, out);
    } else if (suite->parsed()) {
      run_suite(f, out);
    } else {
      ExperimentKind kind = ExperimentKind::ik_sweep;
      if (comb->parsed()) kind = ExperimentKind::combining_sweep;
      if (qsnr->parsed()) kind = ExperimentKind::quality_snr_sweep;
      if (qth->parsed()) kind = ExperimentKind::quality_threshold_sweep;
      const auto plan = build_plan(kind, f);
      const auto [a, b] = load_codecs(plan);
      const auto ctx = make_context(plan, a, b, load_corpus(plan.corpus));
      run_and_write(plan, ctx, out);
    }
  } catch (const UsageError& e) {
    err << "semharq: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "semharq: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace semharq::bench
