#include "clusterlens/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 552.0;  // plot area
constexpr double kTop = 24.0, kBottom = 432.0;
constexpr int kTicks = 5;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
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

}  // namespace

std::string render_linechart(std::span<const Series> series) {
    if (series.empty()) throw error(errc::empty_series, "no series to plot");
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    bool first = true;
    for (const auto& s : series) {
        if (s.points.empty()) throw error(errc::empty_series, "series '" + s.name + "' has no points");
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                throw error(errc::non_finite_value, "series '" + s.name + "' has a non-finite point");
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_max == y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    }

    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
    auto py = [&](double y) { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" fill=\"white\"/>\n";

    // Axes.
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" +
           fmt(kBottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (int t = 0; t < kTicks; ++t) {
        const double f = static_cast<double>(t) / (kTicks - 1);
        const double xv = x_min + f * (x_max - x_min);
        const double yv = y_min + f * (y_max - y_min);
        const double xp = px(xv), yp = py(yv);
        svg += "<line x1=\"" + fmt(xp) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(xp) + "\" y2=\"" +
               fmt(kBottom + 5) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(xp) + "\" y=\"" + fmt(kBottom + 18) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + fmt_tick(xv) +
               "</text>\n";
        svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(yp) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(yp) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(yp + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt_tick(yv) +
               "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        if (series[s].points.size() >= 2) {
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t p = 0; p < series[s].points.size(); ++p) {
                if (p) svg += ' ';
                svg += fmt(px(series[s].points[p].first)) + "," + fmt(py(series[s].points[p].second));
            }
            svg += "\"/>\n";
        }
        for (const auto& [x, y] : series[s].points) {
            svg += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"3\" fill=\"";
            svg += color;
            svg += "\"/>\n";
        }
    }

    // Legend.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        const double ly = kTop + 8 + 18 * static_cast<double>(s);
        svg += "<line x1=\"" + fmt(kRight + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(kRight + 34) +
               "\" y2=\"" + fmt(ly) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(kRight + 40) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(series[s].name) +
               "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void emit_linechart(std::span<const Series> series, const std::string& path) {
    const std::string svg = render_linechart(series);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");
    out << svg;
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

}  // namespace clusterlens
