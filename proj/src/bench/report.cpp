#include "semharq/bench/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semharq/bench/svg_chart.hpp"
#include "semharq/error.hpp"
#include "semharq/number_format.hpp"

namespace semharq::bench {

namespace {

// nlohmann cannot store inf; keep it readable as a string.
nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string to_csv(const SweepResult& r) {
  std::ostringstream o;
  o << r.series_column << ',' << r.x_column
    << ",bleu_mean,bleu_ci,sim_mean,sim_ci,ntx_mean,ntx_ci,n_sessions\n";
  for (const auto& row : r.rows) {
    const auto& s = row.summary;
    o << row.series << ',' << format_double(row.x) << ',' << format_double(s.bleu_mean) << ','
      << format_double(s.bleu_ci) << ',' << format_double(s.sim_mean) << ','
      << format_double(s.sim_ci) << ',' << format_double(s.ntx_mean) << ','
      << format_double(s.ntx_ci) << ',' << s.n_sessions << '\n';
  }
  return o.str();
}

std::string to_jsonl(const SweepResult& r) {
  std::ostringstream o;
  for (const auto& s : r.sessions) {
    nlohmann::json j;
    j[r.series_column] = s.series;
    j[r.x_column] = number_or_string(s.x);
    j["sentence_id"] = s.sentence_id;
    j["trial"] = s.trial;
    auto& attempts = j["attempts"] = nlohmann::json::array();
    for (double q : s.q) attempts.push_back({{"q", q}, {"snr_db", number_or_string(s.snr_db)}});
    j["n_tx"] = s.n_tx;
    j["bleu"] = s.bleu;
    j["similarity"] = s.similarity;
    j["decoded"] = s.decoded;
    o << j.dump() << '\n';
  }
  return o.str();
}

std::string metadata_json(const SweepResult& r) {
  nlohmann::json j(r.metadata);
  j["columns"] = {r.series_column, r.x_column};
  j["series"] = r.series();
  return j.dump(2) + "\n";
}

std::string dynamic_range_csv(const std::vector<DynamicRange>& ranges) {
  std::ostringstream o;
  o << "metric,ntx_min,ntx_max,dynamic_range\n";
  for (const auto& d : ranges) {
    o << d.metric << ',' << format_double(d.ntx_min) << ',' << format_double(d.ntx_max) << ','
      << format_double(d.range()) << '\n';
  }
  return o.str();
}

std::string default_stem(const SweepResult& r) {
  if (r.kind == ExperimentKind::ik_sweep) return to_string(r.kind) + "_" + to_string(r.scenario);
  return to_string(r.kind);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_sweep(const SweepResult& r,
                                               const std::filesystem::path& dir,
                                               const std::string& stem) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& text) {
    const auto path = dir / (stem + suffix);
    write_text(path, text);
    written.push_back(path);
  };
  emit(".csv", to_csv(r));
  emit(".jsonl", to_jsonl(r));
  emit("_meta.json", metadata_json(r));
  emit("_bleu.svg", render_chart(r, {ChartField::bleu, "", true}));
  emit("_similarity.svg", render_chart(r, {ChartField::similarity, "", true}));
  if (r.kind == ExperimentKind::quality_snr_sweep ||
      r.kind == ExperimentKind::quality_threshold_sweep) {
    emit("_ntx.svg", render_chart(r, {ChartField::transmissions, "", true}));
  }
  if (r.kind == ExperimentKind::quality_threshold_sweep) {
    emit("_dynamic_range.csv", dynamic_range_csv(dynamic_range(r)));
  }
  return written;
}

}  // namespace semharq::bench
