#include "svg_chart.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hts::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    // Fixed two decimals keeps the markup stable and compact.
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::round(v * 100.0) / 100.0, std::chars_format::fixed, 2);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("0");
}

std::string tick_label(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("0");
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

double nice_step(double span, int target) {
    if (span <= 0.0) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double f = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return f * mag;
}

}  // namespace

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

std::string render(const LineChart& chart) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = 0.0, ymax = -std::numeric_limits<double>::infinity();
    for (const auto& s : chart.series) {
        for (double x : s.x) { xmin = std::min(xmin, x); xmax = std::max(xmax, x); }
        for (double y : s.y) { if (std::isfinite(y)) { ymin = std::min(ymin, y); ymax = std::max(ymax, y); } }
    }
    if (!std::isfinite(xmin)) { xmin = 0.0; xmax = 1.0; }
    if (!std::isfinite(ymax) || ymax <= ymin) ymax = ymin + 1.0;
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ystep = nice_step(ymax - ymin, 6);
    ymax = std::ceil(ymax / ystep) * ystep;
    ymin = std::floor(ymin / ystep) * ystep;
    const double xstep = nice_step(xmax - xmin, 8);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(chart.title) << "</text>\n";

    // Grid and ticks.
    for (double y = ymin; y <= ymax + ystep * 1e-9; y += ystep) {
        os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
           << num(sy(y)) << "\" stroke=\"#e0e0e0\"/>\n"
           << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">"
           << tick_label(std::abs(y) < ystep * 1e-9 ? 0.0 : y) << "</text>\n";
    }
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + xstep * 1e-9; x += xstep) {
        os << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(x)) << "\" y2=\""
           << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
           << tick_label(x) << "</text>\n";
    }
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16) << "\" text-anchor=\"middle\">"
       << escape(chart.x_label) << "</text>\n"
       << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(chart.y_label) << "</text>\n";

    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const auto& s = chart.series[i];
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) os << " stroke-dasharray=\"6 3\"";
        os << " points=\"";
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (k) os << ' ';
            os << num(sx(s.x[k])) << ',' << num(sy(s.y[k]));
        }
        os << "\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
        const double lx = kLeft + pw + 12;
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24) << "\" y2=\"" << num(ly)
           << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 3\"" : "")
           << "/>\n"
           << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace hts::svg
