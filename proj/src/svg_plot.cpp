#include "ratelab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Round the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(v)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (v <= f * mag + 1e-12) return f * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const SimTrace& trace, const PlotOptions& opt) {
  if (trace.rows.empty()) throw ValidationError("cannot plot an empty trace");

  const double left = 70, right = 80, top = 50, bottom = 60;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;
  const double first = static_cast<double>(trace.rows.front().step);
  const double last = static_cast<double>(trace.rows.back().step);
  const double span = std::max(last - first, 1.0);

  double max_rate = 0;
  for (const auto& row : trace.rows) {
    for (const auto& cell : row.cells) max_rate = std::max(max_rate, cell.rate.to_double());
  }
  const double rate_top = nice_ceiling(max_rate);

  auto x = [&](double step) { return left + (step - first) / span * pw; };
  auto y_util = [&](double u) { return top + (1.0 - u) * ph; };
  auto y_rate = [&](double r) { return top + (1.0 - r / rate_top) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) +
       "\" height=\"" + std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    s += "<text x=\"" + fmt(opt.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(opt.title) + "</text>\n";
  }

  // Axes and ticks.
  s += "<g stroke=\"#444\" fill=\"none\">\n";
  s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + ph) + "\" x2=\"" + fmt(left + pw) +
       "\" y2=\"" + fmt(top + ph) + "\"/>\n";
  s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
       fmt(top + ph) + "\"/>\n";
  s += "<line x1=\"" + fmt(left + pw) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left + pw) +
       "\" y2=\"" + fmt(top + ph) + "\"/>\n";
  s += "</g>\n<g fill=\"#444\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double frac = i / 5.0;
    s += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y_util(frac) + 4) +
         "\" text-anchor=\"end\">" + fmt(frac) + "</text>\n";
    s += "<text x=\"" + fmt(left + pw + 8) + "\" y=\"" + fmt(y_rate(frac * rate_top) + 4) +
         "\">" + fmt(frac * rate_top) + "</text>\n";
    const double step = first + frac * span;
    s += "<text x=\"" + fmt(x(step)) + "\" y=\"" + fmt(top + ph + 18) +
         "\" text-anchor=\"middle\">" + std::to_string(static_cast<long long>(std::lround(step))) +
         "</text>\n";
  }
  s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(top + ph + 42) +
       "\" text-anchor=\"middle\">step</text>\n";
  s += "<text x=\"18\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fmt(top + ph / 2) + ")\">utilization</text>\n";
  s += "<text x=\"" + fmt(opt.width - 14.0) + "\" y=\"" + fmt(top + ph / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(90 " + fmt(opt.width - 14.0) + " " +
       fmt(top + ph / 2) + ")\">rate (APR fraction)</text>\n";
  s += "</g>\n";

  auto polyline = [&](const std::string& id, const std::string& color, const std::string& dash,
                      auto&& y_of) {
    std::string pts;
    for (const auto& row : trace.rows) {
      if (!pts.empty()) pts += ' ';
      pts += fmt(x(static_cast<double>(row.step))) + "," + fmt(y_of(row));
    }
    s += "<polyline class=\"series\" id=\"" + escape(id) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\"" + dash + " points=\"" + pts + "\"/>\n";
  };

  polyline("utilization", "#7f7f7f", " stroke-dasharray=\"6 4\"",
           [&](const TraceRow& r) { return y_util(r.utilization.to_double()); });
  for (std::size_t i = 0; i < trace.strategies.size(); ++i) {
    polyline(trace.strategies[i].name + ".rate", kPalette[i % std::size(kPalette)], "",
             [&](const TraceRow& r) { return y_rate(r.cells[i].rate.to_double()); });
  }

  // Legend.
  double ly = top + 8;
  auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
    s += "<line x1=\"" + fmt(left + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(left + 36) +
         "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
         (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    s += "<text x=\"" + fmt(left + 42) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(label) +
         "</text>\n";
    ly += 18;
  };
  legend("utilization", "#7f7f7f", true);
  for (std::size_t i = 0; i < trace.strategies.size(); ++i) {
    legend(trace.strategies[i].name + " rate", kPalette[i % std::size(kPalette)], false);
  }

  s += "</svg>\n";
  return s;
}

}  // namespace ratelab
