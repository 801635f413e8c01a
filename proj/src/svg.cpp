#include "nhse/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nhse {

namespace {

constexpr double kWidth = 560.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 110.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape(const std::string& s) {
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

void header(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
        << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";
}

void axis_labels(std::ostringstream& out, const std::string& x_label, const std::string& y_label) {
    const double plot_mid_x = kLeft + (kWidth - kLeft - kRight) / 2;
    const double plot_mid_y = kTop + (kHeight - kTop - kBottom) / 2;
    out << "<text x=\"" << num(plot_mid_x) << "\" y=\"" << num(kHeight - 16)
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << num(plot_mid_y) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(plot_mid_y) << ")\">" << escape(y_label) << "</text>\n";
}

// Piecewise-linear blue-green-yellow ramp on [0, 1].
std::string colour(double t) {
    if (!std::isfinite(t)) return "#cccccc";
    static constexpr std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84},
                                                                    {59, 82, 139},
                                                                    {33, 145, 140},
                                                                    {94, 201, 98},
                                                                    {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), 3);
    const double f = t - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<LineSeries>& series,
                           bool log_y) {
    std::ostringstream out;
    header(out, title);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;

    auto yval = [&](double y) { return log_y ? std::log10(y) : y; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!log_y || y > 0.0);
    };
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, yval(s.y[i]));
            ymax = std::max(ymax, yval(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = ymin = 0.0;
        xmax = ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kTop + ph + 16)
            << "\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\">" << (log_y ? "1e" + tick(fy) : tick(fy)) << "</text>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* stroke = kPalette[k % kPalette.size()];
        out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            if (!first) out << ' ';
            out << num(px(s.x[i])) << ',' << num(py(yval(s.y[i])));
            first = false;
        }
        out << "\"/>\n";
        if (!s.label.empty()) {
            const double ly = kTop + 14.0 * static_cast<double>(k) + 6.0;
            out << "<line x1=\"" << num(kWidth - kRight + 8) << "\" y1=\"" << num(ly) << "\" x2=\""
                << num(kWidth - kRight + 24) << "\" y2=\"" << num(ly) << "\" stroke=\"" << stroke
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << num(kWidth - kRight + 28) << "\" y=\"" << num(ly + 4) << "\">"
                << escape(s.label) << "</text>\n";
        }
    }
    axis_labels(out, x_label, y_label);
    out << "</svg>\n";
    return out.str();
}

std::string heatmap_svg(const SweepResult& sweep, const std::string& title) {
    std::ostringstream out;
    header(out, title);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const std::size_t nx = sweep.rows(), ny = sweep.cols();
    const double cw = pw / static_cast<double>(nx), ch = ph / static_cast<double>(ny);
    const auto v1 = sweep.axis1.values();
    const auto v2 = sweep.axis2 ? sweep.axis2->values() : std::vector<double>{};

    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t idx = i * ny + j;
            if (idx >= sweep.cells.size()) continue;
            const double x = kLeft + cw * static_cast<double>(i);
            const double y = kTop + ph - ch * static_cast<double>(j + 1);
            out << "<rect class=\"cell\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
                << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
                << colour(sweep.cells[idx].mean_protected) << "\"/>\n";
        }
    }
    for (std::size_t i = 0; i < nx; ++i)
        out << "<text x=\"" << num(kLeft + cw * (static_cast<double>(i) + 0.5)) << "\" y=\""
            << num(kTop + ph + 16) << "\" text-anchor=\"middle\">" << tick(v1[i]) << "</text>\n";
    for (std::size_t j = 0; j < v2.size(); ++j)
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\""
            << num(kTop + ph - ch * (static_cast<double>(j) + 0.5) + 4)
            << "\" text-anchor=\"end\">" << tick(v2[j]) << "</text>\n";

    const double bx = kWidth - kRight + 30, bw = 18;
    constexpr int steps = 10;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) / steps;
        out << "<rect class=\"legend\" x=\"" << num(bx) << "\" y=\""
            << num(kTop + ph * (1.0 - static_cast<double>(k + 1) / steps)) << "\" width=\"" << num(bw)
            << "\" height=\"" << num(ph / steps) << "\" fill=\"" << colour(t) << "\"/>\n";
    }
    out << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(kTop + 4) << "\">1</text>\n";
    out << "<text x=\"" << num(bx + bw + 4) << "\" y=\"" << num(kTop + ph + 4) << "\">0</text>\n";
    axis_labels(out, sweep.axis1.name, sweep.axis2 ? sweep.axis2->name : std::string{});
    out << "</svg>\n";
    return out.str();
}

std::string semilog_overlay_svg(const std::string& title,
                                const std::vector<std::vector<double>>& vectors) {
    std::vector<LineSeries> series;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        LineSeries s;
        for (std::size_t j = 0; j < vectors[k].size(); ++j) {
            s.x.push_back(static_cast<double>(j + 1));
            s.y.push_back(std::abs(vectors[k][j]));
        }
        series.push_back(std::move(s));
    }
    return line_chart_svg(title, "site j", "|v_j|", series, true);
}

} // namespace nhse
