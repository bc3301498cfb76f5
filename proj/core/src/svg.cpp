#include "hklab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hklab/errors.hpp"

namespace hklab {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

struct Scale {
    double lo, hi;  // log10 range
    double px0, px1;
    double operator()(double v) const {
        return px0 + (std::log10(v) - lo) / (hi - lo) * (px1 - px0);
    }
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::string render_loglog_svg(const std::vector<std::pair<double, double>>& points,
                              const LogLogPlotOptions& opt) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : points)
        if (p.first > 0.0 && p.second > 0.0) pts.push_back(p);
    if (pts.size() < 2) throw ValidationError("render_loglog_svg: need >= 2 positive points");

    double xlo = pts[0].first, xhi = xlo, ylo = pts[0].second, yhi = ylo;
    for (const auto& [x, y] : pts) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
    auto pad = [](double lo, double hi) {
        const double margin = 0.05 * std::max(1e-12, std::log10(hi / lo));
        return std::pair{std::log10(lo) - margin, std::log10(hi) + margin};
    };
    const auto [lx0, lx1] = pad(xlo, xhi);
    const auto [ly0, ly1] = pad(ylo, yhi);
    const Scale sx{lx0, lx1, kLeft, kWidth - kRight};
    const Scale sy{ly0, ly1, kHeight - kBottom, kTop};  // y grows upward

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
        << kHeight << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='15' "
           "font-family='sans-serif'>"
        << opt.title << "</text>\n";

    // decade grid lines and tick labels
    for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1));
         ++e) {
        const double px = sx(std::pow(10.0, e));
        svg << "<line x1='" << px << "' y1='" << kTop << "' x2='" << px << "' y2='"
            << kHeight - kBottom << "' stroke='#dddddd'/>\n";
        svg << "<text x='" << px << "' y='" << kHeight - kBottom + 18
            << "' text-anchor='middle' font-size='11' font-family='sans-serif'>1e" << e
            << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1));
         ++e) {
        const double py = sy(std::pow(10.0, e));
        svg << "<line x1='" << kLeft << "' y1='" << py << "' x2='" << kWidth - kRight
            << "' y2='" << py << "' stroke='#dddddd'/>\n";
        svg << "<text x='" << kLeft - 6 << "' y='" << py + 4
            << "' text-anchor='end' font-size='11' font-family='sans-serif'>1e" << e
            << "</text>\n";
    }
    svg << "<rect x='" << kLeft << "' y='" << kTop << "' width='"
        << kWidth - kLeft - kRight << "' height='" << kHeight - kTop - kBottom
        << "' fill='none' stroke='black'/>\n";

    // data points
    for (const auto& [x, y] : pts)
        svg << "<circle cx='" << num(sx(x)) << "' cy='" << num(sy(y))
            << "' r='2.4' fill='#1f6fb2'/>\n";

    // fitted line: y = exp(-intercept) * x^{-slope}
    auto draw_line = [&](double slope, double anchor_x, double anchor_y,
                         const char* color, const char* dash) {
        const double x0 = xlo, x1 = xhi;
        const double y0 = anchor_y * std::pow(x0 / anchor_x, -slope);
        const double y1 = anchor_y * std::pow(x1 / anchor_x, -slope);
        svg << "<line x1='" << num(sx(x0)) << "' y1='" << num(sy(y0)) << "' x2='"
            << num(sx(x1)) << "' y2='" << num(sy(y1)) << "' stroke='" << color
            << "' stroke-width='1.5'" << (dash[0] ? " stroke-dasharray='6 4'" : "")
            << "/>\n";
    };
    if (opt.has_fit) {
        const double mid_x = std::sqrt(xlo * xhi);
        const double mid_y = std::exp(-(opt.fit_intercept + opt.fit_slope * std::log(mid_x)));
        draw_line(opt.fit_slope, mid_x, mid_y, "#c03030", "");
        svg << "<text x='" << kWidth - kRight - 8 << "' y='" << kTop + 18
            << "' text-anchor='end' font-size='12' font-family='sans-serif' "
               "fill='#c03030'>fit slope "
            << num(opt.fit_slope) << "</text>\n";
    }
    if (opt.has_reference) {
        // anchor the guide through the geometric median point, shifted up a bit
        const auto& mid = pts[pts.size() / 2];
        draw_line(opt.reference_slope, mid.first, mid.second * 1.35, "#2e8b57", "dash");
        svg << "<text x='" << kWidth - kRight - 8 << "' y='" << kTop + 34
            << "' text-anchor='end' font-size='12' font-family='sans-serif' "
               "fill='#2e8b57'>"
            << (opt.reference_label.empty() ? "reference slope " + num(opt.reference_slope)
                                            : opt.reference_label)
            << "</text>\n";
    }

    svg << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='12' font-family='sans-serif'>" << opt.x_label
        << "</text>\n";
    svg << "<text x='16' y='" << kHeight / 2
        << "' text-anchor='middle' font-size='12' font-family='sans-serif' "
           "transform='rotate(-90 16 "
        << kHeight / 2 << ")'>" << opt.y_label << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hklab
