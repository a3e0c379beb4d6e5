#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pqc/common.hpp"

namespace pqc {
namespace svg {

// Method colors follow the comparison legend: batch PQC green, online PQC
// blue, no-penalty red, one-action cyan, relative-penalty orange, DAGGER
// black, DQfD magenta, on-policy DQN purple, DQN+schedule grey.
inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> p = {"green",  "blue",    "red",    "cyan", "orange",
                                               "black",  "magenta", "purple", "grey"};
    return p;
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

struct Frame {
    double x0 = 60, y0 = 20, w = 520, h = 320;  // plot area
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

inline void open_svg(std::ostringstream& os, int w, int h) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
}

inline void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel,
                 const std::string& ylabel) {
    os << "<rect x=\"" << fmt_shortest(f.x0) << "\" y=\"" << fmt_shortest(f.y0) << "\" width=\""
       << fmt_shortest(f.w) << "\" height=\"" << fmt_shortest(f.h)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double ty = f.ymin + (f.ymax - f.ymin) * i / 5.0;
        double py = f.py(ty);
        os << "<line x1=\"" << fmt_shortest(f.x0 - 4) << "\" y1=\"" << fmt_shortest(py)
           << "\" x2=\"" << fmt_shortest(f.x0) << "\" y2=\"" << fmt_shortest(py)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt_shortest(f.x0 - 8) << "\" y=\"" << fmt_shortest(py + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_shortest(ty) << "</text>\n";
        double tx = f.xmin + (f.xmax - f.xmin) * i / 5.0;
        double px = f.px(tx);
        os << "<line x1=\"" << fmt_shortest(px) << "\" y1=\"" << fmt_shortest(f.y0 + f.h)
           << "\" x2=\"" << fmt_shortest(px) << "\" y2=\"" << fmt_shortest(f.y0 + f.h + 4)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt_shortest(px) << "\" y=\"" << fmt_shortest(f.y0 + f.h + 16)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_shortest(tx) << "</text>\n";
    }
    os << "<text x=\"" << fmt_shortest(f.x0 + f.w / 2) << "\" y=\""
       << fmt_shortest(f.y0 + f.h + 32) << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
    os << "<text x=\"14\" y=\"" << fmt_shortest(f.y0 + f.h / 2)
       << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << fmt_shortest(f.y0 + f.h / 2) << ")\">" << ylabel << "</text>\n";
}

inline void legend(std::ostringstream& os, const std::vector<std::string>& names, double x,
                   double y) {
    for (size_t i = 0; i < names.size(); ++i) {
        const std::string& color = palette()[i % palette().size()];
        double ly = y + 16.0 * static_cast<double>(i);
        os << "<rect x=\"" << fmt_shortest(x) << "\" y=\"" << fmt_shortest(ly - 9)
           << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        os << "<text x=\"" << fmt_shortest(x + 16) << "\" y=\"" << fmt_shortest(ly + 1)
           << "\" font-size=\"11\">" << names[i] << "</text>\n";
    }
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream os;
    const int W = 720, H = 420;
    detail::open_svg(os, W, H);
    os << "<text x=\"" << W / 2 << "\" y=\"14\" font-size=\"13\" text-anchor=\"middle\">" << title
       << "</text>\n";
    detail::Frame f;
    bool any = false;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    f.xmin = xmin;
    f.xmax = xmax;
    f.ymin = ymin;
    f.ymax = ymax;
    detail::axes(os, f, xlabel, ylabel);
    std::vector<std::string> names;
    for (size_t i = 0; i < series.size(); ++i) {
        names.push_back(series[i].name);
        if (series[i].points.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << palette()[i % palette().size()]
           << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[i].points)
            os << fmt_shortest(f.px(x)) << "," << fmt_shortest(f.py(y)) << " ";
        os << "\"/>\n";
    }
    detail::legend(os, names, f.x0 + f.w + 8, f.y0 + 10);
    os << "</svg>\n";
    return os.str();
}

// Grouped bar chart: one cluster per group label, one bar per series.
inline std::string bar_chart(const std::vector<std::string>& groups,
                             const std::vector<std::string>& series_names,
                             const std::vector<std::vector<double>>& values,
                             const std::string& title, const std::string& ylabel) {
    std::ostringstream os;
    const int W = 720, H = 420;
    detail::open_svg(os, W, H);
    os << "<text x=\"" << W / 2 << "\" y=\"14\" font-size=\"13\" text-anchor=\"middle\">" << title
       << "</text>\n";
    detail::Frame f;
    f.xmin = 0;
    f.xmax = std::max<size_t>(1, groups.size());
    f.ymin = 0;
    f.ymax = 1;
    for (const auto& vs : values)
        for (double v : vs) f.ymax = std::max(f.ymax, v);
    detail::axes(os, f, "", ylabel);
    size_t n_series = series_names.size();
    for (size_t g = 0; g < groups.size(); ++g) {
        double slot = f.w / static_cast<double>(groups.size());
        double bw = slot * 0.7 / std::max<size_t>(1, n_series);
        for (size_t s = 0; s < n_series; ++s) {
            double v = (s < values.size() && g < values[s].size()) ? values[s][g] : 0.0;
            double x = f.x0 + slot * (static_cast<double>(g) + 0.15) + bw * static_cast<double>(s);
            double y = f.py(v);
            os << "<rect x=\"" << fmt_shortest(x) << "\" y=\"" << fmt_shortest(y) << "\" width=\""
               << fmt_shortest(bw * 0.9) << "\" height=\"" << fmt_shortest(f.y0 + f.h - y)
               << "\" fill=\"" << palette()[s % palette().size()] << "\"/>\n";
        }
        os << "<text x=\"" << fmt_shortest(f.x0 + slot * (static_cast<double>(g) + 0.5))
           << "\" y=\"" << fmt_shortest(f.y0 + f.h + 16)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << groups[g] << "</text>\n";
    }
    detail::legend(os, series_names, f.x0 + f.w + 8, f.y0 + 10);
    os << "</svg>\n";
    return os.str();
}

}  // namespace svg
}  // namespace pqc
