#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace blform {

/// Static single-pane log-log scatter with a fitted line. Axes carry decade
/// ticks; no interactivity, just enough to eyeball a slope.
inline std::string svg_loglog_plot(const std::string& title, const std::vector<double>& xs,
                                   const std::vector<double>& ys, double slope, double intercept) {
    const int width = 640, height = 480, margin = 56;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0 && i < ys.size() && ys[i] > 0) {
            lx.push_back(std::log10(xs[i]));
            ly.push_back(std::log10(ys[i]));
        }
    }
    if (lx.size() < 2) return out.str() + "</svg>\n";
    auto minmax = [](const std::vector<double>& v) {
        auto mm = std::minmax_element(v.begin(), v.end());
        double lo = *mm.first, hi = *mm.second;
        if (hi - lo < 1e-9) {
            lo -= 0.5;
            hi += 0.5;
        }
        return std::pair<double, double>{lo, hi};
    };
    auto [x0, x1] = minmax(lx);
    auto [y0, y1] = minmax(ly);
    double padx = 0.08 * (x1 - x0), pady = 0.12 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
    auto px = [&](double v) { return margin + (v - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin); };

    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
        out << "<line x1=\"" << px(d) << "\" y1=\"" << height - margin << "\" x2=\"" << px(d)
            << "\" y2=\"" << height - margin + 5 << "\" stroke=\"black\"/>"
            << "<text x=\"" << px(d) << "\" y=\"" << height - margin + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
        out << "<line x1=\"" << margin - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << margin
            << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>"
            << "<text x=\"" << margin - 8 << "\" y=\"" << py(d) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
    }

    // fitted line y = slope * x + intercept in natural logs
    double lf0 = (slope * (x0 * std::log(10.0)) + intercept) / std::log(10.0);
    double lf1 = (slope * (x1 * std::log(10.0)) + intercept) / std::log(10.0);
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << py(lf0) << "\" x2=\"" << px(x1) << "\" y2=\""
        << py(lf1) << "\" stroke=\"#888\" stroke-dasharray=\"5,3\"/>\n";

    for (size_t i = 0; i < lx.size(); ++i)
        out << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i])
            << "\" r=\"4\" fill=\"#1f77b4\"/>\n";

    out << "<text x=\"" << width / 2 << "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">"
        << title << " (slope " << slope << ")</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace blform
