// svg.hpp: self-contained line-plot emitter (axes, ticks, polylines, legend).
// Output is deterministic: fixed layout, fixed number formatting.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace decolab {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb4";
    std::string label;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline void expand_range(double& lo, double& hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        lo -= pad;
        hi += pad;
    } else {
        const double pad = (hi - lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
}

}  // namespace detail

inline std::string render_svg_plot(const std::string& title, const std::string& x_label,
                                   const std::string& y_label,
                                   const std::vector<SvgSeries>& series, int width = 800,
                                   int height = 520) {
    if (series.empty()) throw std::invalid_argument("render_svg_plot: no series");
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool seen = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_svg_plot: series length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!seen) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                seen = true;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        }
    }
    if (!seen) throw std::invalid_argument("render_svg_plot: no finite points");
    detail::expand_range(x_lo, x_hi);
    detail::expand_range(y_lo, y_hi);

    const double ml = 72.0, mr = 24.0, mt = 44.0, mb = 52.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + detail::svg_num(width / 2.0) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / n_ticks;
        const double gx = px(fx);
        out += "<line x1=\"" + detail::svg_num(gx) + "\" y1=\"" + detail::svg_num(mt) +
               "\" x2=\"" + detail::svg_num(gx) + "\" y2=\"" + detail::svg_num(mt + ph) +
               "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + detail::svg_num(gx) + "\" y=\"" + detail::svg_num(mt + ph + 18.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::tick_label(fx) + "</text>\n";
        const double fy = y_lo + (y_hi - y_lo) * i / n_ticks;
        const double gy = py(fy);
        out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(gy) +
               "\" x2=\"" + detail::svg_num(ml + pw) + "\" y2=\"" + detail::svg_num(gy) +
               "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml - 6.0) + "\" y=\"" + detail::svg_num(gy + 4.0) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::tick_label(fy) + "</text>\n";
    }
    out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
           detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text x=\"" + detail::svg_num(ml + pw / 2.0) + "\" y=\"" +
           detail::svg_num(height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + detail::svg_num(mt + ph / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           detail::svg_num(mt + ph / 2.0) + ")\">" + y_label + "</text>\n";

    for (const auto& s : series) {
        if (s.x.empty()) continue;
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out += detail::svg_num(px(s.x[i])) + "," + detail::svg_num(py(s.y[i])) + " ";
        }
        out += "\"/>\n";
    }
    double legend_y = mt + 16.0;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out += "<line x1=\"" + detail::svg_num(ml + pw - 150.0) + "\" y1=\"" +
               detail::svg_num(legend_y - 4.0) + "\" x2=\"" + detail::svg_num(ml + pw - 126.0) +
               "\" y2=\"" + detail::svg_num(legend_y - 4.0) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + detail::svg_num(ml + pw - 120.0) + "\" y=\"" +
               detail::svg_num(legend_y) + "\" font-family=\"sans-serif\" font-size=\"12\">" +
               s.label + "</text>\n";
        legend_y += 18.0;
    }
    out += "</svg>\n";
    return out;
}

inline void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                           const std::string& x_label, const std::string& y_label,
                           const std::vector<SvgSeries>& series, int width = 800,
                           int height = 520) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_svg_plot: cannot open " + path.string());
    f << render_svg_plot(title, x_label, y_label, series, width, height);
    if (!f) throw std::runtime_error("write_svg_plot: write failed for " + path.string());
}

}  // namespace decolab
