#include "treid/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace treid {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr int kPaletteSize = 8;

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 56;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  if (v == std::floor(v) && std::abs(v) < 1e9)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

// Round the step down to a 1/2/5 multiple so tick labels stay readable.
double nice_step(double range, int target_ticks) {
  if (range <= 0.0) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac <= 1.0)
    step = 1.0;
  else if (frac <= 2.0)
    step = 2.0;
  else if (frac <= 5.0)
    step = 5.0;
  else
    step = 10.0;
  return step * mag;
}

class Chart {
 public:
  Chart(const PlotOptions& options, double x_lo, double x_hi, double y_lo,
        double y_hi, std::string x_label, std::string y_label)
      : options_(options),
        x_lo_(x_lo),
        x_hi_(x_hi > x_lo ? x_hi : x_lo + 1.0),
        y_lo_(y_lo),
        y_hi_(y_hi > y_lo ? y_hi : y_lo + 1.0),
        x_label_(std::move(x_label)),
        y_label_(std::move(y_label)) {}

  double px(double x) const {
    const double w = options_.width - kMarginLeft - kMarginRight;
    return kMarginLeft + (x - x_lo_) / (x_hi_ - x_lo_) * w;
  }
  double py(double y) const {
    const double h = options_.height - kMarginTop - kMarginBottom;
    return kMarginTop + (y_hi_ - y) / (y_hi_ - y_lo_) * h;
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color) {
    body_ << "  <polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ << ' ';
      body_ << fmt(px(pts[i].first)) << ',' << fmt(py(pts[i].second));
    }
    body_ << "\"/>\n";
  }

  void legend_entry(const std::string& label, const std::string& color) {
    const double x = options_.width - kMarginRight + 16;
    const double y = kMarginTop + 8 + 20.0 * legend_count_++;
    body_ << "  <rect x=\"" << fmt(x) << "\" y=\"" << fmt(y - 9)
          << "\" width=\"14\" height=\"4\" fill=\"" << color << "\"/>\n";
    body_ << "  <text x=\"" << fmt(x + 20) << "\" y=\"" << fmt(y)
          << "\" font-size=\"12\">" << escape(label) << "</text>\n";
  }

  std::string render() const {
    const int w = options_.width;
    const int h = options_.height;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"white\"/>\n";
    if (!options_.title.empty())
      svg << "  <text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          << "font-size=\"15\" font-weight=\"bold\">" << escape(options_.title)
          << "</text>\n";

    const double x0 = kMarginLeft, x1 = w - kMarginRight;
    const double y0 = kMarginTop, y1 = h - kMarginBottom;
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y1 << "\" x2=\"" << x1
        << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
        << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";

    const double x_step = nice_step(x_hi_ - x_lo_, 6);
    for (double t = std::ceil(x_lo_ / x_step) * x_step; t <= x_hi_ + 1e-9;
         t += x_step) {
      svg << "  <line x1=\"" << fmt(px(t)) << "\" y1=\"" << y1 << "\" x2=\""
          << fmt(px(t)) << "\" y2=\"" << y1 + 5 << "\" stroke=\"black\"/>\n";
      svg << "  <text x=\"" << fmt(px(t)) << "\" y=\"" << y1 + 20
          << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_tick(t)
          << "</text>\n";
    }
    const double y_step = nice_step(y_hi_ - y_lo_, 5);
    for (double v = std::ceil(y_lo_ / y_step) * y_step; v <= y_hi_ + 1e-9;
         v += y_step) {
      svg << "  <line x1=\"" << x0 - 5 << "\" y1=\"" << fmt(py(v)) << "\" x2=\""
          << x0 << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"black\"/>\n";
      svg << "  <text x=\"" << x0 - 9 << "\" y=\"" << fmt(py(v) + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_tick(v)
          << "</text>\n";
    }

    svg << "  <text x=\"" << (x0 + x1) / 2 << "\" y=\"" << h - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label_)
        << "</text>\n";
    svg << "  <text x=\"18\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (y0 + y1) / 2 << ")\">" << escape(y_label_) << "</text>\n";

    svg << body_.str();
    svg << "</svg>\n";
    return svg.str();
  }

 private:
  PlotOptions options_;
  double x_lo_, x_hi_, y_lo_, y_hi_;
  std::string x_label_, y_label_;
  std::ostringstream body_;
  int legend_count_ = 0;
};

}  // namespace

std::string rpc_svg(const RpcTable& table, const PlotOptions& options) {
  PlotOptions opts = options;
  if (opts.title.empty()) opts.title = "Rank persistence";
  const double max_minutes =
      table.duration_grid.empty() ? 1.0 : table.duration_grid.back() / 60.0;
  Chart chart(opts, 0.0, max_minutes, 0.0, 1.0, "duration (minutes)",
              "fraction of probes");
  for (std::size_t ri = 0; ri < table.rank_levels.size(); ++ri) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t di = 0; di < table.duration_grid.size(); ++di)
      pts.emplace_back(table.duration_grid[di] / 60.0, table.values[ri][di]);
    const std::string color = kPalette[ri % kPaletteSize];
    chart.polyline(pts, color);
    chart.legend_entry("r = " + std::to_string(table.rank_levels[ri]), color);
  }
  return chart.render();
}

std::string cmc_svg(const CmcTable& table, const PlotOptions& options) {
  PlotOptions opts = options;
  if (opts.title.empty()) opts.title = "Cumulative match characteristic";
  Chart chart(opts, 1.0, static_cast<double>(std::max(table.max_rank, 2)), 0.0, 1.0,
              "rank", "fraction of probes");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < table.values.size(); ++k)
    pts.emplace_back(static_cast<double>(k + 1), table.values[k]);
  chart.polyline(pts, kPalette[1]);
  chart.legend_entry("CMC", kPalette[1]);
  return chart.render();
}

std::string flow_svg(const FlowDensityProfile& profile, const PlotOptions& options) {
  PlotOptions opts = options;
  if (opts.title.empty()) opts.title = "Video flow density";
  double max_rate = 0.0;
  for (std::size_t b = 0; b < profile.counts.size(); ++b)
    max_rate = std::max(max_rate, profile.people_per_second(b));
  const double total_minutes =
      profile.counts.empty()
          ? 1.0
          : static_cast<double>(profile.counts.size()) * profile.bin_width / 60.0;
  Chart chart(opts, 0.0, total_minutes, 0.0, max_rate > 0 ? max_rate * 1.1 : 1.0,
              "time (minutes)", "people per second");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t b = 0; b < profile.counts.size(); ++b) {
    const double rate = profile.people_per_second(b);
    const double t0 = static_cast<double>(b) * profile.bin_width / 60.0;
    const double t1 = static_cast<double>(b + 1) * profile.bin_width / 60.0;
    pts.emplace_back(t0, rate);
    pts.emplace_back(t1, rate);
  }
  if (!pts.empty()) chart.polyline(pts, kPalette[2]);
  chart.legend_entry("arrival rate", kPalette[2]);
  return chart.render();
}

}  // namespace treid
