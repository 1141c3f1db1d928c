#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semharq/bench/experiment.hpp"

namespace semharq::bench {

/// Header: <series column>,<x column>,bleu_mean,bleu_ci,sim_mean,sim_ci,
/// ntx_mean,ntx_ci,n_sessions. Numbers use shortest round-trip form.
std::string to_csv(const SweepResult& result);

/// One JSON object per session: sentence_id, trial, attempts [{q, snr_db}],
/// n_tx, bleu, similarity, plus the series/x cell it belongs to.
std::string to_jsonl(const SweepResult& result);

std::string metadata_json(const SweepResult& result);

/// metric,ntx_min,ntx_max,dynamic_range
std::string dynamic_range_csv(const std::vector<DynamicRange>& ranges);

/// "ik_sweep_aligned", "combining_sweep", ...
std::string default_stem(const SweepResult& result);

/// Writes CSV, JSONL, metadata and SVG charts under `dir` (created if
/// needed) and returns the paths written.
std::vector<std::filesystem::path> write_sweep(const SweepResult& result,
                                               const std::filesystem::path& dir,
                                               const std::string& stem);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace semharq::bench
