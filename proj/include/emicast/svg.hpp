#ifndef EMICAST_SVG_HPP
#define EMICAST_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "emicast/core.hpp"

namespace emicast {

/// Standalone bar chart of ratios in [0,1], one bar per label. The raw data
/// is embedded as an XML comment so downstream tooling needs no SVG parsing.
inline void write_bar_chart_svg(std::ostream& out, const std::string& title,
                                const std::vector<std::string>& labels,
                                const std::vector<double>& values) {
    if (labels.size() != values.size())
        fail(ErrorCode::LengthMismatch, "labels and values differ in length");

    const int bar_w = 90, gap = 30, chart_h = 260, margin = 60;
    const int width = margin * 2 + static_cast<int>(labels.size()) * (bar_w + gap);
    const int height = chart_h + 2 * margin + 20;

    char buf[64];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<!-- data:";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        out << ' ' << labels[i] << '=' << buf;
    }
    out << " -->\n";
    out << "<text x=\"" << width / 2 << "\" y=\"30\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin + chart_h << "\" x2=\""
        << width - margin << "\" y2=\"" << margin + chart_h
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double v = std::clamp(values[i], 0.0, 1.0);
        const int h = static_cast<int>(v * chart_h + 0.5);
        const int x = margin + static_cast<int>(i) * (bar_w + gap) + gap / 2;
        const int y = margin + chart_h - h;
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\""
            << h << "\" fill=\"#4878a8\"/>\n";
        std::snprintf(buf, sizeof(buf), "%.5f", values[i]);
        out << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 6
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << buf
            << "</text>\n";
        out << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << margin + chart_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << labels[i] << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace emicast

#endif // EMICAST_SVG_HPP
