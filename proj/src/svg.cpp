#include "genlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genlab/errors.hpp"
#include "genlab/fmt.hpp"

namespace genlab {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 30, kTop = 40, kBottom = 50;

std::string round3(double v) {
    // Axis/vertex coordinates only; values in labels keep full precision.
    const double r = std::round(v * 1000.0) / 1000.0;
    return format_double(r == 0.0 ? 0.0 : r);
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<double>& x, const std::vector<SvgSeries>& series) {
    if (x.size() < 2) throw InputError("line_chart_svg: need at least two x values");
    for (const auto& s : series)
        if (s.y.size() != x.size())
            throw InputError("line_chart_svg: series length does not match x");

    const bool logx = std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
    std::vector<double> xs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = logx ? std::log10(x[i]) : x[i];

    double x_lo = *std::min_element(xs.begin(), xs.end());
    double x_hi = *std::max_element(xs.begin(), xs.end());
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    double y_lo = series.empty() ? 0.0 : series.front().y.front();
    double y_hi = y_lo;
    for (const auto& s : series)
        for (const double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    auto px = [&](double v) { return kLeft + (v - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); };
    auto py = [&](double v) { return kHeight - kBottom - (v - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" << title << "</text>\n";

    // Axes with 5 ticks each.
    out << "<line x1=\"" << round3(kLeft) << "\" y1=\"" << round3(kHeight - kBottom) << "\" x2=\""
        << round3(kWidth - kRight) << "\" y2=\"" << round3(kHeight - kBottom)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << round3(kLeft) << "\" y1=\"" << round3(kTop) << "\" x2=\""
        << round3(kLeft) << "\" y2=\"" << round3(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t < 5; ++t) {
        const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * t / 4.0;
        out << "<line x1=\"" << round3(px(fx)) << "\" y1=\"" << round3(kHeight - kBottom)
            << "\" x2=\"" << round3(px(fx)) << "\" y2=\"" << round3(kHeight - kBottom + 5)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << round3(px(fx)) << "\" y=\"" << round3(kHeight - kBottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << round3(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
        out << "<line x1=\"" << round3(kLeft - 5) << "\" y1=\"" << round3(py(fy)) << "\" x2=\""
            << round3(kLeft) << "\" y2=\"" << round3(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << round3(kLeft - 9) << "\" y=\"" << round3(py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << round3(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << round3((kLeft + kWidth - kRight) / 2) << "\" y=\""
        << round3(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << (logx ? " (log scale)" : "") << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << series[s].color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out << " ";
            out << round3(px(xs[i])) << "," << round3(py(series[s].y[i]));
        }
        out << "\"/>\n";
        const double ly = kTop + 18.0 * double(s);
        out << "<line x1=\"" << round3(kWidth - kRight - 150) << "\" y1=\"" << round3(ly)
            << "\" x2=\"" << round3(kWidth - kRight - 125) << "\" y2=\"" << round3(ly)
            << "\" stroke=\"" << series[s].color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << round3(kWidth - kRight - 120) << "\" y=\"" << round3(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace genlab
