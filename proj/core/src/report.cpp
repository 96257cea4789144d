#include "evtortho/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evt {

namespace {

constexpr double kInvSqrtTwoPi = 0.39894228040143267794;

void require_kde_input(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw std::invalid_argument("kde: need at least 2 values");
  }
  const double first = values.front();
  const bool distinct =
      std::any_of(values.begin(), values.end(),
                  [first](double v) { return v != first; });
  if (!distinct) {
    throw std::invalid_argument("kde: need at least 2 distinct values");
  }
}

// Linear-interpolation quantile of a sorted sample at probability p.
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// Silverman's rule: 0.9 * min(sd, IQR/1.34) * m^(-1/5), with the IQR term
// dropped when it is zero (heavily tied samples).
double silverman_bandwidth(const std::vector<double>& values) {
  const double m = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= m;
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / (m - 1.0));

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);

  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(m, -0.2);
}

double gaussian_kde_at(const std::vector<double>& values, double bw,
                       double x) {
  double acc = 0.0;
  for (const double v : values) {
    const double t = (x - v) / bw;
    acc += std::exp(-0.5 * t * t);
  }
  return acc * kInvSqrtTwoPi / (bw * static_cast<double>(values.size()));
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
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

}  // namespace

DensityCurve kde(const std::vector<double>& values) {
  require_kde_input(values);
  DensityCurve c;
  c.bandwidth = silverman_bandwidth(values);
  for (std::size_t i = 0; i < kKdeGridSize; ++i) {
    c.grid[i] = -1.0 + 2.0 * static_cast<double>(i) /
                           static_cast<double>(kKdeGridSize - 1);
    c.density[i] = gaussian_kde_at(values, c.bandwidth, c.grid[i]);
  }
  return c;
}

std::string render_violins_svg(const ViolinSpec& spec) {
  if (spec.groups.empty()) {
    throw std::invalid_argument("render_violins_svg: no groups");
  }
  const double y_lo = spec.y_range[0];
  const double y_hi = spec.y_range[1];
  if (!(y_lo < y_hi)) {
    throw std::invalid_argument("render_violins_svg: empty y range");
  }
  for (const ViolinGroup& g : spec.groups) {
    require_kde_input(g.values);
    for (const double v : g.values) {
      if (!(v >= y_lo && v <= y_hi)) {
        throw std::invalid_argument(
            "render_violins_svg: value " + fmt3(v) + " in group '" + g.label +
            "' lies outside the y range (refusing to clamp)");
      }
    }
  }

  const int n_groups = static_cast<int>(spec.groups.size());
  const double slot_w = 160.0;
  const double left = 84.0;
  const double width = left + slot_w * n_groups + 24.0;
  const double top = 72.0;
  const double bottom = 432.0;
  const double height = 480.0;
  const double half_max = 0.42 * slot_w;

  const auto y_px = [&](double v) {
    return bottom - (v - y_lo) / (y_hi - y_lo) * (bottom - top);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fmt2(width) + "\" height=\"" + fmt2(height) + "\" viewBox=\"0 0 " +
         fmt2(width) + " " + fmt2(height) + "\">\n";
  svg += "<rect width=\"" + fmt2(width) + "\" height=\"" + fmt2(height) +
         "\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text x=\"" + fmt2(width / 2.0) +
           "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"17\" fill=\"#1c2733\">" +
           xml_escape(spec.title) + "</text>\n";
  }

  // y axis with ticks every quarter of the range
  svg += "<line x1=\"" + fmt2(left - 16.0) + "\" y1=\"" + fmt2(top) +
         "\" x2=\"" + fmt2(left - 16.0) + "\" y2=\"" + fmt2(bottom) +
         "\" stroke=\"#5c6770\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y_lo + (y_hi - y_lo) * static_cast<double>(t) / 4.0;
    const double y = y_px(v);
    svg += "<line x1=\"" + fmt2(left - 21.0) + "\" y1=\"" + fmt2(y) +
           "\" x2=\"" + fmt2(left - 16.0) + "\" y2=\"" + fmt2(y) +
           "\" stroke=\"#5c6770\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(left - 26.0) + "\" y=\"" + fmt2(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#394049\">" +
           fmt2(v) + "</text>\n";
  }
  if (y_lo < 0.0 && y_hi > 0.0) {
    svg += "<line x1=\"" + fmt2(left - 16.0) + "\" y1=\"" + fmt2(y_px(0.0)) +
           "\" x2=\"" + fmt2(width - 24.0) + "\" y2=\"" + fmt2(y_px(0.0)) +
           "\" stroke=\"#b9c2ca\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 4\"/>\n";
  }
  if (!spec.y_label.empty()) {
    svg += "<text x=\"20\" y=\"" + fmt2((top + bottom) / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#394049\" transform=\"rotate(-90 20 " +
           fmt2((top + bottom) / 2.0) + ")\">" +
           xml_escape(spec.y_label) + "</text>\n";
  }

  for (int gi = 0; gi < n_groups; ++gi) {
    const ViolinGroup& g = spec.groups[gi];
    const double cx = left + slot_w * (gi + 0.5);
    const double bw = silverman_bandwidth(g.values);
    const auto [lo_it, hi_it] = std::minmax_element(g.values.begin(),
                                                    g.values.end());
    const double vmin = *lo_it;
    const double vmax = *hi_it;

    // Sample the mirrored density on the data range (the violin body is the
    // KDE truncated to [min, max], mirrored about the group's axis).
    constexpr int kProfile = 101;
    std::vector<double> vs(kProfile), ds(kProfile);
    double dmax = 0.0;
    for (int i = 0; i < kProfile; ++i) {
      vs[i] = vmin + (vmax - vmin) * static_cast<double>(i) /
                         static_cast<double>(kProfile - 1);
      ds[i] = gaussian_kde_at(g.values, bw, vs[i]);
      dmax = std::max(dmax, ds[i]);
    }

    std::string points;
    for (int i = 0; i < kProfile; ++i) {
      const double w = half_max * ds[i] / dmax;
      points += fmt2(cx - w) + "," + fmt2(y_px(vs[i])) + " ";
    }
    for (int i = kProfile - 1; i >= 0; --i) {
      const double w = half_max * ds[i] / dmax;
      points += fmt2(cx + w) + "," + fmt2(y_px(vs[i]));
      if (i > 0) points += " ";
    }
    svg += "<polygon points=\"" + points +
           "\" fill=\"#5b8cb8\" fill-opacity=\"0.65\" stroke=\"#31506e\" "
           "stroke-width=\"1\"/>\n";

    svg += "<text x=\"" + fmt2(cx) +
           "\" y=\"56\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#1c2733\">" +
           fmt3(g.header_annotation) + "</text>\n";
    svg += "<text x=\"" + fmt2(cx) + "\" y=\"" + fmt2(bottom + 26.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#1c2733\">" +
           xml_escape(g.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_violins(const ViolinSpec& spec, const std::string& path) {
  const std::string svg = render_violins_svg(spec);
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("render_violins: cannot open " + path);
  }
  f << svg;
  if (!f.good()) {
    throw std::runtime_error("render_violins: write failed for " + path);
  }
}

}  // namespace evt
