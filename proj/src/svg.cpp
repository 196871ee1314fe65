#include "episurv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace episurv {

namespace {

// Fixed canvas: 800x600 with 70/20/20/50 px margins (left/right/top/bottom).
constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 70, kRight = 20, kTop = 20, kBottom = 50;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_scatter_svg(const std::vector<ScatterPoint>& points, std::ostream& out,
                       const std::string& x_label, const std::string& y_label) {
    double hi = 1.0;
    for (const auto& p : points)
        if (std::isfinite(p.x)) hi = std::max(hi, p.x);
    hi *= 1.05;
    const double lo = 0.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double v) { return kLeft + (v - lo) / (hi - lo) * plot_w; };
    const auto sy = [&](double v) { return kHeight - kBottom - (v - lo) / (hi - lo) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
        << num(plot_w) << "\" height=\"" << num(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Ticks at 5 even positions.
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        out << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << num(kHeight - kBottom)
            << "\" x2=\"" << num(sx(v)) << "\" y2=\"" << num(kHeight - kBottom + 6)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kHeight - kBottom + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << num(v) << "</text>\n";
        out << "<line x1=\"" << num(kLeft - 6) << "\" y1=\"" << num(sy(v)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(sy(v)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 10) << "\" y=\"" << num(sy(v) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << num(kTop + plot_h / 2)
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num(kTop + plot_h / 2) << ")\">" << y_label << "</text>\n";

    // Diagonal reference line.
    out << "<line x1=\"" << num(sx(lo)) << "\" y1=\"" << num(sy(lo)) << "\" x2=\""
        << num(sx(hi)) << "\" y2=\"" << num(sy(hi))
        << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
        if (p.y > hi) {
            // Out of range: open triangle pinned to the top border.
            const double cx = sx(std::min(p.x, hi));
            const double cy = kTop + 6;
            out << "<path d=\"M" << num(cx) << ' ' << num(cy - 5) << " L" << num(cx - 5)
                << ' ' << num(cy + 4) << " L" << num(cx + 5) << ' ' << num(cy + 4)
                << " Z\" fill=\"none\" stroke=\"red\"/>\n";
            continue;
        }
        out << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y))
            << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace episurv
