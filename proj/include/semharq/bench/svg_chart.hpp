#pragma once

#include <string>
#include <vector>

#include "semharq/bench/experiment.hpp"

namespace semharq::bench {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  /// Half-widths; empty or all zero draws no band.
  std::vector<double> ci;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  bool show_ci = true;
  int width = 720;
  int height = 440;
};

/// Which summary column a sweep chart plots.
enum class ChartField { bleu, similarity, transmissions };

struct ChartSpec {
  ChartField field = ChartField::bleu;
  /// Empty: derived from the sweep kind.
  std::string title;
  bool show_ci = true;
};

/// Standalone SVG 1.1 document. Output depends only on the input (fixed
/// number formatting, fixed palette, no timestamps). Throws InvalidArgument
/// for an empty chart, mismatched series lengths or non-finite values.
std::string render_svg(const LineChart& chart);

/// One series per combiner or metric, in order of first appearance.
LineChart chart_from_sweep(const SweepResult& result, const ChartSpec& spec);

std::string render_chart(const SweepResult& result, const ChartSpec& spec);

}  // namespace semharq::bench
