#include "svg.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <string>

#include "csvio.hpp"

namespace jumpsde::tools {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 700, kTop = 48, kBottom = 430;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string fmt_coord(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  assert(ec == std::errc{});
  (void)ec;
  return std::string(buf, ptr);
}

bool plottable(const MomentPoint& p) {
  return std::isfinite(p.msq) && p.msq > 0.0;
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string render_moments_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, const MomentSeries*>>& series) {
  double t_max = 0.0;
  double log_min = 0.0, log_max = 0.0;
  bool any = false;
  for (const auto& [label, s] : series) {
    for (const MomentPoint& p : s->points) {
      t_max = std::max(t_max, p.time);
      if (!plottable(p)) continue;
      const double ly = std::log10(p.msq);
      if (!any) {
        log_min = log_max = ly;
        any = true;
      } else {
        log_min = std::min(log_min, ly);
        log_max = std::max(log_max, ly);
      }
    }
  }
  if (!any) {
    log_min = -1.0;
    log_max = 1.0;
  }
  if (t_max <= 0.0) t_max = 1.0;

  double dec_lo = std::floor(log_min);
  double dec_hi = std::ceil(log_max);
  if (dec_hi <= dec_lo) dec_hi = dec_lo + 1.0;

  const auto x_of = [&](double t) {
    return kLeft + (kRight - kLeft) * (t / t_max);
  };
  const auto y_of = [&](double ly) {
    return kBottom - (kBottom - kTop) * ((ly - dec_lo) / (dec_hi - dec_lo));
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fmt_coord(kWidth) + "\" height=\"" + fmt_coord(kHeight) +
         "\" viewBox=\"0 0 " + fmt_coord(kWidth) + " " + fmt_coord(kHeight) +
         "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt_coord(kWidth) + "\" height=\"" +
         fmt_coord(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt_coord((kLeft + kRight) / 2) +
         "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">" +
         escape_text(title) + "</text>\n";

  // Horizontal gridlines and labels at decade ticks.
  const long span = static_cast<long>(dec_hi - dec_lo);
  const long tick_step = std::max<long>(1, (span + 9) / 10);
  for (long k = static_cast<long>(dec_lo); k <= static_cast<long>(dec_hi);
       k += tick_step) {
    const double y = y_of(static_cast<double>(k));
    svg += "<line x1=\"" + fmt_coord(kLeft) + "\" y1=\"" + fmt_coord(y) +
           "\" x2=\"" + fmt_coord(kRight) + "\" y2=\"" + fmt_coord(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    const std::string label = k == 0 ? "1" : "1e" + std::to_string(k);
    svg += "<text x=\"" + fmt_coord(kLeft - 6) + "\" y=\"" + fmt_coord(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" +
           label + "</text>\n";
  }
  // Vertical gridlines at six even time ticks.
  for (int k = 0; k <= 5; ++k) {
    const double t = t_max * k / 5.0;
    const double x = x_of(t);
    svg += "<line x1=\"" + fmt_coord(x) + "\" y1=\"" + fmt_coord(kTop) +
           "\" x2=\"" + fmt_coord(x) + "\" y2=\"" + fmt_coord(kBottom) +
           "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(kBottom + 16) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           fmt_shortest(t) + "</text>\n";
  }

  // Axes.
  svg += "<line x1=\"" + fmt_coord(kLeft) + "\" y1=\"" + fmt_coord(kTop) +
         "\" x2=\"" + fmt_coord(kLeft) + "\" y2=\"" + fmt_coord(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt_coord(kLeft) + "\" y1=\"" + fmt_coord(kBottom) +
         "\" x2=\"" + fmt_coord(kRight) + "\" y2=\"" + fmt_coord(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + fmt_coord((kLeft + kRight) / 2) + "\" y=\"" +
         fmt_coord(kHeight - 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt_coord((kTop + kBottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " +
         fmt_coord((kTop + kBottom) / 2) + ")\">E|Y|^2</text>\n";

  // Series polylines, split at unplottable points.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    std::string points;
    const auto flush = [&]() {
      if (!points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (const MomentPoint& p : series[i].second->points) {
      if (!plottable(p)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt_coord(x_of(p.time)) + ',' + fmt_coord(y_of(std::log10(p.msq)));
    }
    flush();
  }

  // Legend row under the title.
  double lx = kLeft;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % kPaletteSize];
    svg += "<line x1=\"" + fmt_coord(lx) + "\" y1=\"34\" x2=\"" +
           fmt_coord(lx + 18) + "\" y2=\"34\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt_coord(lx + 22) +
           "\" y=\"38\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape_text(series[i].first) + "</text>\n";
    lx += 30.0 + 7.0 * static_cast<double>(series[i].first.size());
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace jumpsde::tools
