#include "semharq/bench/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "semharq/error.hpp"

namespace semharq::bench {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string tick_label(double v, double step) {
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s.size() > 1 && s[0] == '-' && std::all_of(s.begin() + 1, s.end(), [](char c) {
        return c == '0' || c == '.';
      })) {
    s.erase(0, 1);
  }
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi, step;
};

// 1-2-5 ticks covering [lo, hi] with about five intervals.
Axis nice_axis(double lo, double hi) {
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  return {std::floor(lo / step + 1e-9) * step, std::ceil(hi / step - 1e-9) * step, step};
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  if (chart.series.empty()) throw InvalidArgument("render_svg: no series");
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : chart.series) {
    if (s.x.empty() || s.x.size() != s.y.size() || (!s.ci.empty() && s.ci.size() != s.y.size())) {
      throw InvalidArgument("render_svg: series '" + s.name + "' has inconsistent lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double ci = s.ci.empty() || !chart.show_ci ? 0.0 : s.ci[i];
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || !std::isfinite(ci)) {
        throw InvalidArgument("render_svg: non-finite value in series '" + s.name + "'");
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i] - ci);
      y_hi = std::max(y_hi, s.y[i] + ci);
    }
  }
  const Axis xa = nice_axis(x_lo, x_hi);
  const Axis ya = nice_axis(y_lo, y_hi);

  const double left = 70, right = 170, top = 50, bottom = 60;
  const double w = chart.width, h = chart.height;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double x) { return left + (x - xa.lo) / (xa.hi - xa.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - ya.lo) / (ya.hi - ya.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << chart.width
    << "\" height=\"" << chart.height << "\" viewBox=\"0 0 " << chart.width << ' '
    << chart.height << "\" font-family=\"sans-serif\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << chart.width << "\" height=\"" << chart.height
    << "\" fill=\"#ffffff\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">"
    << escape(chart.title) << "</text>\n";

  o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const auto nx = static_cast<int>(std::lround((xa.hi - xa.lo) / xa.step));
  const auto ny = static_cast<int>(std::lround((ya.hi - ya.lo) / ya.step));
  for (int i = 0; i <= nx; ++i) {
    const double x = px(xa.lo + i * xa.step);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\""
      << num(top + ph) << "\"/>\n";
  }
  for (int i = 0; i <= ny; ++i) {
    const double y = py(ya.lo + i * ya.step);
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw)
      << "\" y2=\"" << num(y) << "\"/>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
    << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  o << "<g font-size=\"11\" fill=\"#333333\">\n";
  for (int i = 0; i <= nx; ++i) {
    const double v = xa.lo + i * xa.step;
    o << "<text x=\"" << num(px(v)) << "\" y=\"" << num(top + ph + 16)
      << "\" text-anchor=\"middle\">" << tick_label(v, xa.step) << "</text>\n";
  }
  for (int i = 0; i <= ny; ++i) {
    const double v = ya.lo + i * ya.step;
    o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(v) + 4)
      << "\" text-anchor=\"end\">" << tick_label(v, ya.step) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(h - 18)
    << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
    << " transform=\"rotate(-90 18 " << num(top + ph / 2) << ")\">" << escape(chart.y_label)
    << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const bool band = chart.show_ci && !s.ci.empty() &&
                      std::any_of(s.ci.begin(), s.ci.end(), [](double c) { return c > 0.0; });
    o << "<g>\n";
    if (band) {
      o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        o << num(px(s.x[i])) << ',' << num(py(s.y[i] + s.ci[i])) << ' ';
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        o << num(px(s.x[i])) << ',' << num(py(s.y[i] - s.ci[i])) << (i ? " " : "");
      }
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    o << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    o << "</g>\n";

    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    const double lx = left + pw + 16;
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">"
      << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

LineChart chart_from_sweep(const SweepResult& result, const ChartSpec& spec) {
  if (result.rows.empty()) throw InvalidArgument("render_chart: empty sweep result");
  LineChart chart;
  chart.show_ci = spec.show_ci;
  switch (result.kind) {
    case ExperimentKind::ik_sweep: chart.x_label = "Transmission attempts K"; break;
    case ExperimentKind::quality_threshold_sweep: chart.x_label = "Quality threshold q_th"; break;
    default: chart.x_label = "Semantic SNR (dB)"; break;
  }
  switch (spec.field) {
    case ChartField::bleu: chart.y_label = "BLEU-4"; break;
    case ChartField::similarity: chart.y_label = "Cosine similarity"; break;
    case ChartField::transmissions: chart.y_label = "Mean transmissions per sentence"; break;
  }
  chart.title = spec.title.empty()
                    ? to_string(result.kind) + " (" + to_string(result.scenario) + ")"
                    : spec.title;
  for (const auto& name : result.series()) {
    ChartSeries s;
    s.name = name;
    for (const auto& r : result.rows) {
      if (r.series != name) continue;
      s.x.push_back(r.x);
      switch (spec.field) {
        case ChartField::bleu:
          s.y.push_back(r.summary.bleu_mean);
          s.ci.push_back(r.summary.bleu_ci);
          break;
        case ChartField::similarity:
          s.y.push_back(r.summary.sim_mean);
          s.ci.push_back(r.summary.sim_ci);
          break;
        case ChartField::transmissions:
          s.y.push_back(r.summary.ntx_mean);
          s.ci.push_back(r.summary.ntx_ci);
          break;
      }
    }
    chart.series.push_back(std::move(s));
  }
  return chart;
}

std::string render_chart(const SweepResult& result, const ChartSpec& spec) {
  return render_svg(chart_from_sweep(result, spec));
}

}  // namespace semharq::bench
