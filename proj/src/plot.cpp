#include "lrlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 450;
constexpr double kLeft = 80;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double x, const char* fmt = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return ticks;
}

}  // namespace

std::string render_svg(const ResultTable& table, const PlotSpec& spec) {
  const int xi = table.param_index(spec.x_param);
  if (xi < 0) throw DomainError("render_svg: no parameter column '" + spec.x_param + "'");
  const int si = spec.series_param.empty() ? -1 : table.param_index(spec.series_param);
  if (!spec.series_param.empty() && si < 0)
    throw DomainError("render_svg: no parameter column '" + spec.series_param + "'");

  std::map<std::string, Series> by_key;
  std::vector<std::string> order;
  for (const auto& row : table.rows()) {
    if (std::find(spec.quantities.begin(), spec.quantities.end(), row.quantity) == spec.quantities.end()) continue;
    const double x = row.params[static_cast<std::size_t>(xi)];
    const double y = row.value;
    if (!std::isfinite(x) || !std::isfinite(y) || (spec.log_y && y <= 0.0)) continue;
    std::string key = row.quantity;
    if (si >= 0) {
      const double s = row.params[static_cast<std::size_t>(si)];
      if (!std::isfinite(s)) continue;
      key = row.quantity + " " + spec.series_param + "=" + num(s, "%g");
    }
    auto [it, inserted] = by_key.try_emplace(key, Series{key, {}});
    if (inserted) order.push_back(key);
    it->second.points.emplace_back(x, y);
  }
  if (spec.max_series > 0 && static_cast<int>(order.size()) > spec.max_series) {
    std::vector<std::string> kept;
    for (int k = 0; k < spec.max_series; ++k) {
      const std::size_t idx = static_cast<std::size_t>(
          std::llround(static_cast<double>(k) * (order.size() - 1) / (spec.max_series - 1)));
      if (kept.empty() || kept.back() != order[idx]) kept.push_back(order[idx]);
    }
    order = kept;
  }

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& key : order)
    for (auto [x, y] : by_key[key].points) {
      const double yy = spec.log_y ? std::log10(y) : y;
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = yy;
        any = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, yy);
      ymax = std::max(ymax, yy);
    }
  if (spec.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : linear_ticks(xmin, xmax)) {
    svg << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
        << num(kTop + ph + 5) << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
        << num(t, "%g") << "</text>\n";
  }
  std::vector<double> yticks;
  if (spec.log_y) {
    const int stride = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8.0)));
    for (double e = ymin; e <= ymax + 1e-9; e += stride) yticks.push_back(e);
  } else {
    yticks = linear_ticks(ymin, ymax);
  }
  for (double t : yticks) {
    svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(sy(t)) << "\" stroke=\"black\"/>";
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
        << num(sy(t)) << "\" stroke=\"#dddddd\"/>";
    const std::string label = spec.log_y ? "1e" + num(t, "%g") : num(t, "%g");
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
      << escape(spec.x_label.empty() ? spec.x_param : spec.x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < order.size(); ++k) {
    auto pts = by_key[order[k]].points;
    std::stable_sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.first < b.first; });
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double y = spec.log_y ? std::log10(pts[i].second) : pts[i].second;
      svg << (i ? " " : "") << num(sx(pts[i].first)) << ',' << num(sy(y));
    }
    svg << "\"/>\n";
    for (auto [x, yv] : pts) {
      const double y = spec.log_y ? std::log10(yv) : yv;
      svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>";
    }
    svg << '\n';
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + pw + 32)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    svg << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4) << "\">" << escape(order[k])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace lrlab
