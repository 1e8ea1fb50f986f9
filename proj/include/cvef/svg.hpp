#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "cvef/common.hpp"

namespace cvef {

/// One labelled series for the log-log plot.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // positive (x, y)
};

/// Minimal self-contained SVG log-log line plot, one polyline per series.
inline void write_loglog_svg(const std::string& path, const std::string& title,
                             const std::vector<PlotSeries>& series) {
    const double w = 640.0, h = 480.0, margin = 60.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            xmin = std::min(xmin, std::log10(x));
            xmax = std::max(xmax, std::log10(x));
            ymin = std::min(ymin, std::log10(y));
            ymax = std::max(ymax, std::log10(y));
        }
    if (xmin >= xmax || ymin >= ymax)
        throw Error(ErrorKind::invalid_argument, "svg: nothing plottable (need positive spans)");

    auto px = [&](double lx) { return margin + (lx - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto py = [&](double ly) {
        return h - margin - (ly - ymin) / (ymax - ymin) * (h - 2 * margin);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "svg: cannot open '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w - 2 * margin
        << "\" height=\"" << h - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade grid lines with labels
    for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
        out << "<line x1=\"" << px(d) << "\" y1=\"" << margin << "\" x2=\"" << px(d) << "\" y2=\""
            << h - margin << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << px(d) << "\" y=\"" << h - margin + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
        out << "<line x1=\"" << margin << "\" y1=\"" << py(d) << "\" x2=\"" << w - margin
            << "\" y2=\"" << py(d) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << margin - 6 << "\" y=\"" << py(d) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[i % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            out << px(std::log10(x)) << ',' << py(std::log10(y)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - margin - 6 << "\" y=\"" << margin + 18 + 16 * i
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[i % 6] << "\">"
            << series[i].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace cvef
