#include "routersim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace routersim::plot {

namespace {

struct Point {
    double x = 0;  // log2(m)
    double y = 0;
    double err = 0;
};

struct Series {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<Point> points;
};

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f5fa8", "#c23b22", "#2e7d32", "#7b1fa2",
                                   "#e08900", "#00838f", "#5d4037", "#455a64"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_l(double l) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", l);
    return buf;
}

std::vector<Series> build_series(const std::vector<harness::SummaryRow>& rows, PlotKind kind) {
    if (rows.empty()) throw std::invalid_argument("plot: no data rows");

    std::vector<Series> series;
    if (kind == PlotKind::Ratio) {
        // (L, m) -> per-architecture rate
        std::map<double, std::map<int, std::map<std::string, harness::SummaryRow>>> grid;
        for (const auto& row : rows) grid[row.l_km][row.m][row.architecture] = row;
        std::size_t color = 0;
        for (const auto& [l, by_m] : grid) {
            Series s;
            s.label = "L = " + fmt_l(l) + " km";
            s.color = palette(color++);
            for (const auto& [m, by_arch] : by_m) {
                if (!by_arch.count("router") || !by_arch.count("routerless"))
                    throw std::invalid_argument("plot: ratio needs both architectures at m=" +
                                                std::to_string(m) + ", L=" + fmt_l(l));
                const auto& num = by_arch.at("router");
                const auto& den = by_arch.at("routerless");
                if (den.rate_hz_mean <= 0)
                    throw std::invalid_argument("plot: zero routerless rate at m=" + std::to_string(m));
                Point p;
                p.x = std::log2(static_cast<double>(m));
                p.y = num.rate_hz_mean / den.rate_hz_mean;
                const double rn = num.rate_hz_sem / num.rate_hz_mean;
                const double rd = den.rate_hz_sem / den.rate_hz_mean;
                p.err = p.y * std::sqrt(rn * rn + rd * rd);
                s.points.push_back(p);
            }
            series.push_back(std::move(s));
        }
        return series;
    }

    std::map<std::pair<std::string, double>, std::vector<const harness::SummaryRow*>> groups;
    for (const auto& row : rows) groups[{row.architecture, row.l_km}].push_back(&row);
    std::size_t color = 0;
    for (const auto& [key, members] : groups) {
        Series s;
        s.label = key.first + ", L = " + fmt_l(key.second) + " km";
        s.color = palette(color++);
        s.dashed = key.first == "routerless";
        std::vector<const harness::SummaryRow*> sorted = members;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto* a, const auto* b) { return a->m < b->m; });
        for (const auto* row : sorted) {
            Point p;
            p.x = std::log2(static_cast<double>(row->m));
            if (kind == PlotKind::Rate) {
                p.y = row->rate_hz_mean;
                p.err = row->rate_hz_sem;
            } else {
                p.y = row->infidelity_mean;
                p.err = row->fidelity_sem;
            }
            s.points.push_back(p);
        }
        series.push_back(std::move(s));
    }
    return series;
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "rate") return PlotKind::Rate;
    if (name == "infidelity") return PlotKind::Infidelity;
    if (name == "ratio") return PlotKind::Ratio;
    throw std::invalid_argument("plot: unknown kind '" + name + "' (expected rate|infidelity|ratio)");
}

std::string render_plot(const std::vector<harness::SummaryRow>& rows, PlotKind kind) {
    const std::vector<Series> series = build_series(rows, kind);

    double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
    for (const Series& s : series)
        for (const Point& p : s.points) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_max = std::max(y_max, p.y + p.err);
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    y_max *= 1.05;

    const double width = 720, height = 480;
    const double ml = 80, mr = 24, mt = 48, mb = 56;
    const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
    const auto py = [&](double y) {
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    };

    const char* titles[] = {"Delivered-pair rate vs multiplexing", "Infidelity vs multiplexing",
                            "Router/routerless rate ratio vs multiplexing"};
    const char* y_labels[] = {"rate (Hz)", "1 - fidelity", "rate ratio"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\">"
        << titles[static_cast<int>(kind)] << "</text>\n";

    // Axes.
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
        << height - mb << "\" stroke=\"#000\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
        << "\" stroke=\"#000\"/>\n";

    // X ticks at integer log2(m).
    for (int e = static_cast<int>(std::ceil(x_min - 1e-9)); e <= static_cast<int>(std::floor(x_max + 1e-9));
         ++e) {
        const double x = px(static_cast<double>(e));
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << height - mb << "\" x2=\"" << fmt(x) << "\" y2=\""
            << height - mb + 5 << "\" stroke=\"#000\"/>\n"
            << "<text x=\"" << fmt(x) << "\" y=\"" << height - mb + 20
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
            << (1 << std::max(e, 0)) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">m (registers)</text>\n";

    // Y ticks: five evenly spaced.
    for (int i = 0; i <= 5; ++i) {
        const double y = y_min + (y_max - y_min) * i / 5.0;
        const double yp = py(y);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(yp) << "\" x2=\"" << ml << "\" y2=\""
            << fmt(yp) << "\" stroke=\"#000\"/>\n"
            << "<text x=\"" << ml - 9 << "\" y=\"" << fmt(yp + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << fmt(y)
            << "</text>\n";
    }
    svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (mt + height - mb) / 2 << ")\">" << y_labels[static_cast<int>(kind)] << "</text>\n";

    // Series: polyline, error bars, markers, legend.
    double legend_y = mt + 8;
    for (const Series& s : series) {
        std::ostringstream pts;
        for (const Point& p : s.points) pts << fmt(px(p.x)) << ',' << fmt(py(p.y)) << ' ';
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"" << pts.str() << "\"/>\n";
        for (const Point& p : s.points) {
            if (p.err > 0) {
                svg << "<line x1=\"" << fmt(px(p.x)) << "\" y1=\"" << fmt(py(p.y - p.err)) << "\" x2=\""
                    << fmt(px(p.x)) << "\" y2=\"" << fmt(py(p.y + p.err)) << "\" stroke=\"" << s.color
                    << "\"/>\n";
            }
            svg << "<circle cx=\"" << fmt(px(p.x)) << "\" cy=\"" << fmt(py(p.y)) << "\" r=\"3\" fill=\""
                << s.color << "\"/>\n";
        }
        svg << "<line x1=\"" << width - mr - 170 << "\" y1=\"" << fmt(legend_y - 4) << "\" x2=\""
            << width - mr - 146 << "\" y2=\"" << fmt(legend_y - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
            << "<text x=\"" << width - mr - 140 << "\" y=\"" << fmt(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 16;
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace routersim::plot
