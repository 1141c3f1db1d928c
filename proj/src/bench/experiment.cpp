#include "semharq/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "semharq/bench/stats.hpp"
#include "semharq/channel.hpp"
#include "semharq/error.hpp"
#include "semharq/metrics.hpp"
#include "semharq/number_format.hpp"

namespace semharq::bench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> default_snr_axis() { return {-9, -6, -3, 0, 3, 6, 9}; }

std::vector<double> default_thresholds() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<QualityMetric> all_metrics() {
  return {std::begin(kAllQualityMetrics), std::end(kAllQualityMetrics)};
}

std::vector<CombinerMethod> all_combiners() {
  return {std::begin(kAllCombiners), std::end(kAllCombiners)};
}

/// One combiner as it appears in a forced sweep: method plus label.
struct SeriesSpec {
  std::string label;
  CombinerSpec spec;
};

std::vector<SeriesSpec> forced_series(const ExperimentPlan& plan) {
  std::vector<SeriesSpec> out;
  for (auto m : plan.combiners) {
    CombinerSpec spec{m, plan.harq.combiner.iterative_update};
    out.push_back({to_string(m), spec});
    if (m == CombinerMethod::iterative) {
      // The running-quality rule is an interpretation; report the other one too.
      const auto other = spec.iterative_update == IterativeUpdate::accumulate
                             ? IterativeUpdate::max
                             : IterativeUpdate::accumulate;
      out.push_back({"iterative_" + to_string(other), {m, other}});
    }
  }
  return out;
}

ChannelConfig cell_channel(const ExperimentPlan& plan, Scenario scenario, double snr_db) {
  ChannelConfig ch = plan.harq.channel;
  ch.snr_db = snr_db;
  if (scenario == Scenario::misaligned && ch.bias_mode == BiasMode::none) {
    ch.bias_mode = BiasMode::misaligned_codec;
  }
  return ch;
}

const SemanticCodec& rx_codec(const BenchContext& ctx, Scenario scenario) {
  return scenario == Scenario::misaligned ? static_cast<const SemanticCodec&>(ctx.codec_b)
                                          : static_cast<const SemanticCodec&>(ctx.codec_a);
}

/// Accumulates session outcomes into rows keyed by (series, x).
class RowBuilder {
 public:
  SweepRow& at(const std::string& series, double x) {
    for (auto& r : rows_) {
      if (r.series == series && r.x == x) return r;
    }
    rows_.push_back(SweepRow{series, x, {}, {}, {}, {}});
    return rows_.back();
  }

  std::vector<SweepRow> finish(const ExperimentPlan& plan) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto& r = rows_[i];
      const auto b = bootstrap_mean_ci(r.bleu, plan.bootstrap_resamples,
                                       derive_seed(plan.seed, 0xb0075, 3 * i));
      const auto s = bootstrap_mean_ci(r.similarity, plan.bootstrap_resamples,
                                       derive_seed(plan.seed, 0xb0075, 3 * i + 1));
      const auto n = bootstrap_mean_ci(r.ntx, plan.bootstrap_resamples,
                                       derive_seed(plan.seed, 0xb0075, 3 * i + 2));
      r.summary = {b.mean, b.ci, s.mean, s.ci, n.mean, n.ci, r.bleu.size()};
    }
    return std::move(rows_);
  }

 private:
  std::vector<SweepRow> rows_;
};

struct Scorer {
  const SemanticCodec& rx;
  std::vector<Eigen::VectorXd> reference_mu;

  Scorer(const SemanticCodec& rx_codec, const std::vector<std::string>& sentences) : rx(rx_codec) {
    for (const auto& s : sentences) reference_mu.push_back(rx.encode_text(s).mu);
  }

  void record(SweepRow& row, SessionRecord& rec, const std::string& source,
              const HarqSessionResult& result) const {
    rec.n_tx = result.n_transmissions;
    rec.decoded = result.decoded;
    rec.bleu = sentence_bleu4(result.decoded, source);
    rec.similarity = cosine(reference_mu[rec.sentence_id], rx.encode_text(result.decoded).mu);
    for (const auto& a : result.attempts) rec.q.push_back(a.quality.value);
    row.bleu.push_back(rec.bleu);
    row.similarity.push_back(rec.similarity);
    row.ntx.push_back(static_cast<double>(rec.n_tx));
  }
};

void common_metadata(SweepResult& out, const ExperimentPlan& plan, const BenchContext& ctx) {
  auto& m = out.metadata;
  m["experiment"] = to_string(plan.kind);
  m["scenario"] = to_string(out.scenario);
  m["seed"] = std::to_string(plan.seed);
  m["n_sentences"] = std::to_string(ctx.sentences.size());
  m["n_trials"] = std::to_string(plan.n_trials);
  m["p_z"] = format_double(ctx.p_z);
  m["bleu"] = "smoothed sentence BLEU-4 of the final decode against the source, averaged";
  m["similarity"] =
      "cosine of receiver-codec encoder means of source and final decode, averaged";
  m["ci"] = "95% percentile bootstrap of the mean over sessions (" +
            std::to_string(plan.bootstrap_resamples) + " resamples); *_ci is the half-width";
  m["quality_epsilon"] = format_double(plan.harq.quality.epsilon);
  m["quality_n_passes"] = std::to_string(plan.harq.quality.n_passes);
  m["quality_temperature"] = format_double(plan.harq.quality.temperature);
  m["bleu_brevity_penalty"] = plan.harq.quality.brevity_penalty ? "true" : "false";
  m["channel_bias_mode"] = to_string(plan.harq.channel.bias_mode);
  m["rng"] = "session stream derived from (seed, sentence, trial); shared across cells";
  if (plan.snr_db.size() > 1) {
    m["snr_step_db"] = format_double(plan.snr_db[1] - plan.snr_db[0]);
  }
}

/// Forced-K grid: one K_max transmission per (sentence, trial), combined
/// over every prefix length. Chase gets its own repeated-latent transmission
/// drawn from the same session stream.
void forced_grid(const ExperimentPlan& plan, const BenchContext& ctx, Scenario scenario,
                 bool x_is_snr, SweepResult& out) {
  const auto series = forced_series(plan);
  const std::size_t k_max = *std::max_element(plan.k_values.begin(), plan.k_values.end());
  const bool need_fresh = std::any_of(series.begin(), series.end(), [](const auto& s) {
    return s.spec.method != CombinerMethod::chase;
  });
  const bool need_chase = std::any_of(series.begin(), series.end(), [](const auto& s) {
    return s.spec.method == CombinerMethod::chase;
  });
  const SemanticCodec& rx = rx_codec(ctx, scenario);
  const Scorer scorer(rx, ctx.sentences);
  std::vector<EncoderOutput> posteriors;
  for (const auto& s : ctx.sentences) posteriors.push_back(ctx.codec_a.encode_text(s));

  RowBuilder rows;
  for (double snr : plan.snr_db) {
    const HarqLink link(ctx.codec_a, rx, cell_channel(plan, scenario, snr), ctx.p_z);
    for (std::size_t i = 0; i < ctx.sentences.size(); ++i) {
      for (std::size_t t = 0; t < plan.n_trials; ++t) {
        std::optional<HarqSessionResult> fresh, repeated;
        if (need_fresh) {
          Rng rng = session_rng(plan.seed, i, t);
          fresh = transmit(posteriors[i], link, plan.harq.quality, k_max, false, std::nullopt, rng);
        }
        if (need_chase) {
          Rng rng = session_rng(plan.seed, i, t);
          repeated = transmit(posteriors[i], link, plan.harq.quality, k_max, true, std::nullopt, rng);
        }
        for (const auto& s : series) {
          const auto& sent = s.spec.method == CombinerMethod::chase ? *repeated : *fresh;
          for (std::size_t k : plan.k_values) {
            const double x = x_is_snr ? snr : static_cast<double>(k);
            SessionRecord rec;
            rec.series = s.label;
            rec.x = x;
            rec.sentence_id = i;
            rec.trial = t;
            rec.snr_db = snr;
            scorer.record(rows.at(s.label, x), rec, ctx.sentences[i], finish(sent, k, s.spec, rx));
            out.sessions.push_back(std::move(rec));
          }
        }
      }
    }
  }
  out.rows = rows.finish(plan);
}

void closed_loop_grid(const ExperimentPlan& plan, const BenchContext& ctx, bool x_is_snr,
                      SweepResult& out) {
  const Scenario scenario = plan.scenario;
  const SemanticCodec& rx = rx_codec(ctx, scenario);
  const Scorer scorer(rx, ctx.sentences);
  const auto& xs = x_is_snr ? plan.snr_db : plan.thresholds;

  RowBuilder rows;
  for (auto metric : plan.metrics) {
    const std::string label = to_string(metric);
    for (double x : xs) {
      HarqConfig cfg = plan.harq;
      cfg.quality.metric = metric;
      const double snr = x_is_snr ? x : plan.snr_db.front();
      if (!x_is_snr) cfg.q_th = x;
      cfg.channel = cell_channel(plan, scenario, snr);
      const HarqLink link(ctx.codec_a, rx, cfg.channel, ctx.p_z);
      for (std::size_t i = 0; i < ctx.sentences.size(); ++i) {
        for (std::size_t t = 0; t < plan.n_trials; ++t) {
          Rng rng = session_rng(plan.seed, i, t);
          SessionRecord rec;
          rec.series = label;
          rec.x = x;
          rec.sentence_id = i;
          rec.trial = t;
          rec.snr_db = snr;
          scorer.record(rows.at(label, x), rec, ctx.sentences[i],
                        run_session(ctx.sentences[i], cfg, link, rng));
          out.sessions.push_back(std::move(rec));
        }
      }
    }
  }
  out.rows = rows.finish(plan);
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "train") return ExperimentKind::train;
  if (s == "ik_sweep") return ExperimentKind::ik_sweep;
  if (s == "combining_sweep") return ExperimentKind::combining_sweep;
  if (s == "quality_snr_sweep") return ExperimentKind::quality_snr_sweep;
  if (s == "quality_threshold_sweep") return ExperimentKind::quality_threshold_sweep;
  throw InvalidArgument("unknown experiment '" + std::string(name) + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::train: return "train";
    case ExperimentKind::ik_sweep: return "ik_sweep";
    case ExperimentKind::combining_sweep: return "combining_sweep";
    case ExperimentKind::quality_snr_sweep: return "quality_snr_sweep";
    case ExperimentKind::quality_threshold_sweep: return "quality_threshold_sweep";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "aligned") return Scenario::aligned;
  if (name == "misaligned") return Scenario::misaligned;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "' (aligned | misaligned)");
}

std::string to_string(Scenario scenario) {
  return scenario == Scenario::aligned ? "aligned" : "misaligned";
}

ExperimentPlan ExperimentPlan::defaults(ExperimentKind kind, Scenario scenario) {
  ExperimentPlan p;
  p.kind = kind;
  p.scenario = scenario;
  switch (kind) {
    case ExperimentKind::train:
    case ExperimentKind::ik_sweep:
      p.snr_db = {scenario == Scenario::aligned ? 0.0 : kInf};
      p.combiners = all_combiners();
      break;
    case ExperimentKind::combining_sweep:
      p.scenario = Scenario::misaligned;
      p.k_values = {5};
      p.snr_db = default_snr_axis();
      p.combiners = all_combiners();
      break;
    case ExperimentKind::quality_snr_sweep:
      p.scenario = Scenario::misaligned;
      p.snr_db = default_snr_axis();
      p.metrics = all_metrics();
      break;
    case ExperimentKind::quality_threshold_sweep:
      p.scenario = Scenario::misaligned;
      p.snr_db = {0.0};
      p.thresholds = default_thresholds();
      p.metrics = all_metrics();
      break;
  }
  return p;
}

void ExperimentPlan::validate() const {
  if (n_sentences < 1) throw InvalidArgument("plan: n_sentences must be >= 1");
  if (n_trials < 1) throw InvalidArgument("plan: n_trials must be >= 1");
  if (power_samples < 1) throw InvalidArgument("plan: power_samples must be >= 1");
  harq.validate();
  for (auto k : k_values) {
    if (k < 1) throw InvalidArgument("plan: K values must be >= 1");
  }
  switch (kind) {
    case ExperimentKind::train: break;
    case ExperimentKind::ik_sweep:
    case ExperimentKind::combining_sweep:
      if (k_values.empty() || snr_db.empty() || combiners.empty()) {
        throw InvalidArgument("plan: forced sweeps need K, SNR and combiner axes");
      }
      break;
    case ExperimentKind::quality_snr_sweep:
      if (snr_db.empty() || metrics.empty()) {
        throw InvalidArgument("plan: quality SNR sweep needs SNR and metric axes");
      }
      break;
    case ExperimentKind::quality_threshold_sweep:
      if (snr_db.empty() || thresholds.empty() || metrics.empty()) {
        throw InvalidArgument("plan: threshold sweep needs an SNR, thresholds and metrics");
      }
      break;
  }
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys{
      "experiment.n_sentences", "experiment.n_trials", "experiment.seed",
      "experiment.scenario", "experiment.k", "experiment.snr_db", "experiment.thresholds",
      "experiment.metrics", "experiment.combiners", "experiment.power_samples",
      "experiment.bootstrap_resamples", "harq.q_th", "harq.k_max", "quality.metric",
      "quality.n_passes", "quality.temperature", "quality.epsilon", "bleu.brevity_penalty",
      "combiner.method", "combiner.iterative_update", "channel.snr_db", "channel.bias_mode",
      "channel.bias_scale", "channel.seed", "corpus.path", "corpus.split_seed",
      "corpus.min_words", "corpus.max_words", "training.epochs", "training.patience",
      "training.learning_rate", "training.batch_size", "training.beta_start",
      "training.beta_end", "training.anneal_epochs", "training.free_bits",
      "training.kl_convention", "training.snr_set", "training.grad_clip",
      "training.word_dropout", "training.label_smoothing", "training.seed",
      "training.vocab_size", "codec.latent_dim", "codec.max_decode_len", "checkpoint.a",
      "checkpoint.b", "output.dir"};
  return keys;
}

void apply_config(ExperimentPlan& p, const ConfigFile& c) {
  c.check_known(known_config_keys());
  auto get = [&](const char* key) { return c.get(key); };

  if (auto v = get("experiment.scenario")) {
    p.scenario = parse_scenario(*v);
    if (p.kind == ExperimentKind::ik_sweep) p.snr_db = {p.scenario == Scenario::aligned ? 0.0 : kInf};
  }
  if (auto v = get("channel.snr_db")) p.snr_db = {parse_number(*v)};
  if (auto v = get("experiment.snr_db")) p.snr_db = parse_number_list(*v);
  if (auto v = get("experiment.n_sentences")) p.n_sentences = parse_count(*v);
  if (auto v = get("experiment.n_trials")) p.n_trials = parse_count(*v);
  if (auto v = get("experiment.seed")) p.seed = parse_count(*v);
  if (auto v = get("experiment.k")) {
    p.k_values.clear();
    for (double k : parse_number_list(*v)) p.k_values.push_back(parse_count(format_double(k)));
  }
  if (auto v = get("experiment.thresholds")) p.thresholds = parse_number_list(*v);
  if (auto v = get("experiment.metrics")) {
    p.metrics.clear();
    for (const auto& m : parse_word_list(*v)) p.metrics.push_back(parse_quality_metric(m));
  }
  if (auto v = get("experiment.combiners")) {
    p.combiners.clear();
    for (const auto& m : parse_word_list(*v)) p.combiners.push_back(parse_combiner(m));
  }
  if (auto v = get("experiment.power_samples")) p.power_samples = parse_count(*v);
  if (auto v = get("experiment.bootstrap_resamples")) p.bootstrap_resamples = parse_count(*v);

  if (auto v = get("harq.q_th")) p.harq.q_th = parse_number(*v);
  if (auto v = get("harq.k_max")) p.harq.k_max = parse_count(*v);
  if (auto v = get("quality.metric")) p.harq.quality.metric = parse_quality_metric(*v);
  if (auto v = get("quality.n_passes")) p.harq.quality.n_passes = parse_count(*v);
  if (auto v = get("quality.temperature")) p.harq.quality.temperature = parse_number(*v);
  if (auto v = get("quality.epsilon")) p.harq.quality.epsilon = parse_number(*v);
  if (auto v = get("bleu.brevity_penalty")) p.harq.quality.brevity_penalty = parse_bool(*v);
  if (auto v = get("combiner.method")) p.harq.combiner.method = parse_combiner(*v);
  if (auto v = get("combiner.iterative_update")) {
    p.harq.combiner.iterative_update = parse_iterative_update(*v);
  }
  if (auto v = get("channel.bias_mode")) p.harq.channel.bias_mode = parse_bias_mode(*v);
  if (auto v = get("channel.bias_scale")) p.harq.channel.bias_scale = parse_number(*v);
  if (auto v = get("channel.seed")) p.harq.channel.seed = parse_count(*v);

  if (auto v = get("corpus.path")) p.corpus.path = *v;
  if (auto v = get("corpus.split_seed")) p.corpus.split_seed = parse_count(*v);
  if (auto v = get("corpus.min_words")) p.corpus.min_words = parse_count(*v);
  if (auto v = get("corpus.max_words")) p.corpus.max_words = parse_count(*v);

  auto& t = p.training;
  if (auto v = get("training.epochs")) t.epochs = parse_count(*v);
  if (auto v = get("training.patience")) t.patience = parse_count(*v);
  if (auto v = get("training.learning_rate")) t.learning_rate = parse_number(*v);
  if (auto v = get("training.batch_size")) t.batch_size = parse_count(*v);
  if (auto v = get("training.beta_start")) t.beta_start = parse_number(*v);
  if (auto v = get("training.beta_end")) t.beta_end = parse_number(*v);
  if (auto v = get("training.anneal_epochs")) t.anneal_epochs = parse_count(*v);
  if (auto v = get("training.free_bits")) t.free_bits = parse_number(*v);
  if (auto v = get("training.kl_convention")) t.kl_convention = parse_kl_convention(*v);
  if (auto v = get("training.snr_set")) t.snr_set_db = parse_number_list(*v);
  if (auto v = get("training.grad_clip")) t.grad_clip = parse_number(*v);
  if (auto v = get("training.word_dropout")) t.word_dropout = parse_number(*v);
  if (auto v = get("training.label_smoothing")) t.label_smoothing = parse_number(*v);
  if (auto v = get("training.seed")) t.seed = parse_count(*v);
  if (auto v = get("training.vocab_size")) t.vocab_size = parse_count(*v);
  if (auto v = get("codec.latent_dim")) t.codec.latent_dim = parse_count(*v);
  if (auto v = get("codec.max_decode_len")) t.codec.max_decode_len = parse_count(*v);

  if (auto v = get("checkpoint.a")) p.checkpoint_a = *v;
  if (auto v = get("checkpoint.b")) p.checkpoint_b = *v;
  if (auto v = get("output.dir")) p.out_dir = *v;
}

CorpusSplit load_corpus(const CorpusOptions& options) {
  const auto path = options.path.empty() ? bundled_corpus_path() : options.path;
  const auto all = load_sentences(path);
  const auto kept = filter_by_length(all, options.min_words, options.max_words);
  if (kept.size() < 3) {
    throw InvalidArgument("corpus " + path.string() + " has too few sentences within " +
                          std::to_string(options.min_words) + ".." +
                          std::to_string(options.max_words) + " words");
  }
  return split_corpus(kept, {0.8, 0.1, 0.1}, options.split_seed);
}

BenchContext make_context(const ExperimentPlan& plan, const Checkpoint& a, const Checkpoint& b,
                          const CorpusSplit& corpus) {
  if (corpus.test.empty()) throw InvalidArgument("bench: empty test split");
  if (!(a.vocab == b.vocab)) throw InvalidArgument("bench: Codec-A and Codec-B vocabularies differ");
  if (a.config.latent_dim != b.config.latent_dim) {
    throw DimensionMismatch("bench: Codec-A and Codec-B latent dimensions differ");
  }
  if (corpus.test.size() < plan.n_sentences) {
    throw InvalidArgument("bench: test split has " + std::to_string(corpus.test.size()) +
                          " sentences, plan asks for " + std::to_string(plan.n_sentences));
  }
  BenchContext ctx{a.model(), b.model(),
                   {corpus.test.begin(),
                    corpus.test.begin() + static_cast<std::ptrdiff_t>(plan.n_sentences)},
                   0.0};
  Rng rng(derive_seed(plan.seed, 0x907e));
  ctx.p_z = measure_latent_power(ctx.codec_a, ctx.sentences, plan.power_samples, rng).p_z;
  if (!(ctx.p_z > 0.0)) throw Error("bench: Codec-A latent power is zero");
  return ctx;
}

std::vector<std::string> SweepResult::series() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.series) == out.end()) out.push_back(r.series);
  }
  return out;
}

const SweepRow& SweepResult::row(const std::string& series, double x) const {
  for (const auto& r : rows) {
    if (r.series == series && r.x == x) return r;
  }
  throw InvalidArgument("sweep has no row (" + series + ", " + format_double(x) + ")");
}

SweepResult run_ik_sweep(const ExperimentPlan& plan, const BenchContext& ctx) {
  plan.validate();
  SweepResult out;
  out.kind = ExperimentKind::ik_sweep;
  out.scenario = plan.scenario;
  out.series_column = "combiner";
  out.x_column = "k";
  common_metadata(out, plan, ctx);
  out.metadata["snr_db"] = format_double(plan.snr_db.front());
  out.metadata["quality_metric"] = to_string(plan.harq.quality.metric);
  out.metadata["transmission"] =
      "forced K, no feedback; fresh latent per attempt, chase repeats the first";
  ExperimentPlan p = plan;
  p.snr_db = {plan.snr_db.front()};
  forced_grid(p, ctx, plan.scenario, false, out);
  return out;
}

SweepResult run_combining_sweep(const ExperimentPlan& plan, const BenchContext& ctx) {
  plan.validate();
  SweepResult out;
  out.kind = ExperimentKind::combining_sweep;
  out.scenario = plan.scenario;
  out.series_column = "combiner";
  out.x_column = "snr_db";
  common_metadata(out, plan, ctx);
  ExperimentPlan p = plan;
  p.k_values = {*std::max_element(plan.k_values.begin(), plan.k_values.end())};
  out.metadata["k"] = std::to_string(p.k_values.front());
  out.metadata["quality_metric"] = to_string(plan.harq.quality.metric);
  forced_grid(p, ctx, plan.scenario, true, out);
  return out;
}

SweepResult run_quality_snr_sweep(const ExperimentPlan& plan, const BenchContext& ctx) {
  plan.validate();
  SweepResult out;
  out.kind = ExperimentKind::quality_snr_sweep;
  out.scenario = plan.scenario;
  out.series_column = "metric";
  out.x_column = "snr_db";
  common_metadata(out, plan, ctx);
  out.metadata["q_th"] = format_double(plan.harq.q_th);
  out.metadata["k_max"] = std::to_string(plan.harq.k_max);
  out.metadata["combiner"] = to_string(plan.harq.combiner.method);
  closed_loop_grid(plan, ctx, true, out);
  return out;
}

SweepResult run_quality_threshold_sweep(const ExperimentPlan& plan, const BenchContext& ctx) {
  plan.validate();
  SweepResult out;
  out.kind = ExperimentKind::quality_threshold_sweep;
  out.scenario = plan.scenario;
  out.series_column = "metric";
  out.x_column = "q_th";
  common_metadata(out, plan, ctx);
  out.metadata["snr_db"] = format_double(plan.snr_db.front());
  out.metadata["k_max"] = std::to_string(plan.harq.k_max);
  out.metadata["combiner"] = to_string(plan.harq.combiner.method);
  closed_loop_grid(plan, ctx, false, out);
  return out;
}

SweepResult run_sweep(const ExperimentPlan& plan, const BenchContext& ctx) {
  switch (plan.kind) {
    case ExperimentKind::ik_sweep: return run_ik_sweep(plan, ctx);
    case ExperimentKind::combining_sweep: return run_combining_sweep(plan, ctx);
    case ExperimentKind::quality_snr_sweep: return run_quality_snr_sweep(plan, ctx);
    case ExperimentKind::quality_threshold_sweep: return run_quality_threshold_sweep(plan, ctx);
    case ExperimentKind::train: break;
  }
  throw InvalidArgument("run_sweep: '" + to_string(plan.kind) + "' is not a sweep");
}

std::vector<DynamicRange> dynamic_range(const SweepResult& sweep) {
  std::vector<DynamicRange> out;
  for (const auto& name : sweep.series()) {
    DynamicRange d{name, std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    for (const auto& r : sweep.rows) {
      if (r.series != name) continue;
      d.ntx_min = std::min(d.ntx_min, r.summary.ntx_mean);
      d.ntx_max = std::max(d.ntx_max, r.summary.ntx_mean);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace semharq::bench
