#include "syncnet/svg.hpp"

#include "syncnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace syncnet {

namespace {

constexpr double kWidth = 960, kHeight = 540;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

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

}  // namespace

std::string render_svg(const std::vector<SvgSeries>& series, const std::vector<double>& switch_times,
                       const std::string& title) {
    double t0 = std::numeric_limits<double>::infinity(), t1 = -t0;
    double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
    for (const auto& s : series) {
        if (s.t.size() != s.y.size()) throw DimensionError("series '" + s.label + "' has mismatched t and y");
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            if (!std::isfinite(s.t[k])) continue;
            t0 = std::min(t0, s.t[k]);
            t1 = std::max(t1, s.t[k]);
            if (std::isfinite(s.y[k]) && s.y[k] > 0.0) {
                ymin = std::min(ymin, s.y[k]);
                ymax = std::max(ymax, s.y[k]);
            }
        }
    }
    if (!std::isfinite(t0)) t0 = 0.0, t1 = 1.0;
    if (t1 <= t0) t1 = t0 + 1.0;
    if (!(ymax > 0.0)) ymin = 0.1, ymax = 10.0;
    double lo = std::floor(std::log10(ymin)), hi = std::ceil(std::log10(ymax));
    if (hi <= lo) hi = lo + 1.0;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
    auto py = [&](double y) {
        double ly = std::log10(std::max(y, ymin));
        return kTop + (hi - ly) / (hi - lo) * ph;
    };

    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 960 540\" width=\"960\" height=\"540\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"white\"/>\n";
    os << "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << escape(title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const int decades = static_cast<int>(hi - lo);
    const int stride = std::max(1, decades / 10);
    for (int d = 0; d <= decades; d += stride) {
        double e = lo + d;
        double y = kTop + (hi - e) / (hi - lo) * ph;
        os << "<line class=\"grid\" x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << static_cast<int>(e)
           << "</text>\n";
    }
    for (int k = 0; k <= 5; ++k) {
        double t = t0 + (t1 - t0) * k / 5.0;
        os << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << t << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t</text>\n";

    for (double s : switch_times) {
        if (s <= t0 || s > t1) continue;
        os << "<line class=\"switch\" x1=\"" << px(s) << "\" y1=\"" << kTop << "\" x2=\"" << px(s) << "\" y2=\""
           << kTop + ph << "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            if (!std::isfinite(s.t[k]) || std::isnan(s.y[k])) continue;
            os << px(s.t[k]) << ',' << py(s.y[k]) << ' ';
        }
        os << "\"><title>" << escape(s.label) << "</title></polyline>\n";
        os << "<text x=\"" << kLeft + pw - 8 << "\" y=\"" << kTop + 16 + 14 * static_cast<double>(i)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
           << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace syncnet
