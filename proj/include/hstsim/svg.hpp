// svg.hpp - minimal static line charts for the result CSV
//
// Log-scale y, one polyline per series. The CSV stays the contract; these
// charts are a convenience for eyeballing sweeps.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hstsim {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y; // positive values (log axis)
};

inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series) {
    const int width = 720, height = 480;
    const int ml = 70, mr = 170, mt = 40, mb = 50;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = 0.0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            if (s.y[i] > 0.0) {
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= 0.0) {
        y_min = 1e-12;
        y_max = 1.0;
    }
    if (y_min == y_max) y_min = y_max / 10.0;
    const double ly_min = std::floor(std::log10(y_min));
    const double ly_max = std::ceil(std::log10(y_max));

    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
    auto py = [&](double y) {
        const double ly = std::log10(std::max(y, std::pow(10.0, ly_min - 1.0)));
        return mt + (ly_max - ly) / (ly_max - ly_min) * (height - mt - mb);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // axes and gridlines
    for (int d = static_cast<int>(ly_min); d <= static_cast<int>(ly_max); ++d) {
        const double yy = py(std::pow(10.0, d));
        out << "<line x1='" << ml << "' y1='" << yy << "' x2='" << width - mr << "' y2='" << yy
            << "' stroke='#dddddd'/>\n";
        out << "<text x='" << ml - 8 << "' y='" << yy + 4 << "' text-anchor='end'>1e" << d
            << "</text>\n";
    }
    const int x_ticks = 8;
    for (int i = 0; i <= x_ticks; ++i) {
        const double xv = x_min + (x_max - x_min) * i / x_ticks;
        out << "<text x='" << px(xv) << "' y='" << height - mb + 18
            << "' text-anchor='middle'>" << xv << "</text>\n";
    }
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n";
    out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
        << "' text-anchor='middle'>" << x_label << "</text>\n";
    out << "<text x='18' y='" << (mt + height - mb) / 2 << "' text-anchor='middle' transform='"
        << "rotate(-90 18 " << (mt + height - mb) / 2 << ")'>" << y_label << "</text>\n";

    int color = 0;
    for (const auto& s : series) {
        const char* c = palette[color % 8];
        out << "<polyline fill='none' stroke='" << c << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << ',' << py(std::max(s.y[i], std::pow(10.0, ly_min - 1.0))) << ' ';
        out << "'/>\n";
        out << "<text x='" << width - mr + 10 << "' y='" << mt + 16 * color + 12 << "' fill='"
            << c << "'>" << s.label << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace hstsim
