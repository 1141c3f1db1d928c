#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semharq/bench/config.hpp"
#include "semharq/checkpoint.hpp"
#include "semharq/combining.hpp"
#include "semharq/harq.hpp"
#include "semharq/linear_vae.hpp"
#include "semharq/quality.hpp"
#include "semharq/training.hpp"

namespace semharq::bench {

enum class ExperimentKind { train, ik_sweep, combining_sweep, quality_snr_sweep, quality_threshold_sweep };

ExperimentKind parse_experiment_kind(std::string_view name);
/// "ik_sweep", "combining_sweep", ...
std::string to_string(ExperimentKind kind);

enum class Scenario {
  /// Codec-A on both sides.
  aligned,
  /// Codec-A at the transmitter, Codec-B at the receiver.
  misaligned,
};

Scenario parse_scenario(std::string_view name);
std::string to_string(Scenario scenario);

struct CorpusOptions {
  /// Empty means the bundled corpus.
  std::filesystem::path path;
  std::uint64_t split_seed = 1;
  std::size_t min_words = 5;
  std::size_t max_words = 50;
};

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::ik_sweep;
  std::vector<std::size_t> k_values{1, 2, 3, 4, 5};
  std::vector<double> snr_db;
  std::vector<double> thresholds;
  std::vector<QualityMetric> metrics;
  std::vector<CombinerMethod> combiners;
  std::size_t n_sentences = 30;
  std::size_t n_trials = 20;
  Scenario scenario = Scenario::aligned;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;

  /// q_th, k_max, quality estimator, combiner and channel settings.
  HarqConfig harq;
  std::size_t power_samples = 1000;
  std::size_t bootstrap_resamples = 1000;
  CorpusOptions corpus;
  TrainingConfig training;
  std::filesystem::path checkpoint_a;
  std::filesystem::path checkpoint_b;

  /// Default axes for `kind` (and scenario, for the IK sweep).
  static ExperimentPlan defaults(ExperimentKind kind, Scenario scenario = Scenario::aligned);
  void validate() const;
};

/// Every key accepted by apply_config.
const std::vector<std::string>& known_config_keys();

/// Overrides plan fields from config keys; unknown keys are rejected.
void apply_config(ExperimentPlan& plan, const ConfigFile& config);

/// Bundled (or configured) corpus, length-filtered and split.
CorpusSplit load_corpus(const CorpusOptions& options);

/// Codecs, test sentences and latent power shared by every sweep.
struct BenchContext {
  LinearVae codec_a;
  LinearVae codec_b;
  std::vector<std::string> sentences;
  /// P_z of the transmitter codec (always Codec-A) over the test sentences.
  double p_z = 0.0;
};

BenchContext make_context(const ExperimentPlan& plan, const Checkpoint& a, const Checkpoint& b,
                          const CorpusSplit& corpus);

struct SessionRecord {
  std::string series;
  double x = 0.0;
  std::size_t sentence_id = 0;
  std::size_t trial = 0;
  std::vector<double> q;
  double snr_db = 0.0;
  std::size_t n_tx = 0;
  double bleu = 0.0;
  double similarity = 0.0;
  std::string decoded;
};

struct CellSummary {
  double bleu_mean = 0.0, bleu_ci = 0.0;
  double sim_mean = 0.0, sim_ci = 0.0;
  double ntx_mean = 0.0, ntx_ci = 0.0;
  std::size_t n_sessions = 0;
};

struct SweepRow {
  /// Combiner or metric name.
  std::string series;
  /// K, SNR in dB, or threshold.
  double x = 0.0;
  CellSummary summary;
  /// Per-session values in (sentence, trial) order, so rows sharing a
  /// session schedule can be compared pairwise.
  std::vector<double> bleu;
  std::vector<double> similarity;
  std::vector<double> ntx;
};

struct SweepResult {
  ExperimentKind kind = ExperimentKind::ik_sweep;
  Scenario scenario = Scenario::aligned;
  /// CSV column names of the series and x axes ("combiner"/"metric",
  /// "k"/"snr_db"/"q_th").
  std::string series_column;
  std::string x_column;
  std::vector<SweepRow> rows;
  std::vector<SessionRecord> sessions;
  std::map<std::string, std::string> metadata;

  std::vector<std::string> series() const;
  /// Throws InvalidArgument when absent.
  const SweepRow& row(const std::string& series, double x) const;
};

/// Forced-K sessions for every combiner (default: chase and the four
/// quality-aware methods). Aligned: Codec-A/A at the plan SNR (0 dB by
/// default); misaligned: Codec-A/B without noise.
SweepResult run_ik_sweep(const ExperimentPlan& plan, const BenchContext& ctx);
/// Misaligned Codec-A/B, K = max(k_values) forced, SNR axis.
SweepResult run_combining_sweep(const ExperimentPlan& plan, const BenchContext& ctx);
/// Closed loop per quality metric over the SNR axis at fixed q_th.
SweepResult run_quality_snr_sweep(const ExperimentPlan& plan, const BenchContext& ctx);
/// Closed loop per quality metric over the threshold axis at one SNR.
SweepResult run_quality_threshold_sweep(const ExperimentPlan& plan, const BenchContext& ctx);

SweepResult run_sweep(const ExperimentPlan& plan, const BenchContext& ctx);

struct DynamicRange {
  std::string metric;
  double ntx_min = 0.0;
  double ntx_max = 0.0;
  double range() const { return ntx_max - ntx_min; }
};

/// Max minus min mean transmissions across thresholds, per metric.
std::vector<DynamicRange> dynamic_range(const SweepResult& threshold_sweep);

}  // namespace semharq::bench
