#include "nwlab/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nwlab/io/table.hpp"

namespace nwlab::io {

namespace {

constexpr double width = 720.0;
constexpr double height = 480.0;
constexpr double margin_l = 70.0;
constexpr double margin_r = 20.0;
constexpr double margin_t = 40.0;
constexpr double margin_b = 55.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    double to_px(double v, double px_lo, double px_hi) const {
        const double t = (v - lo) / (hi - lo);
        return px_lo + t * (px_hi - px_lo);
    }
};

std::vector<double> ticks_for(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
        out.push_back(t);
    return out;
}

std::ofstream open_svg(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot open " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out;
}

void draw_frame(std::ofstream& out, const std::string& title, const std::string& x_label,
                const std::string& y_label, const Axis& ax, const Axis& ay) {
    out << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<text x=\"" << (margin_l + (width - margin_r)) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (margin_t + (height - margin_b)) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (margin_t + (height - margin_b)) / 2 << ")\">" << y_label << "</text>\n";
    out << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\""
        << width - margin_l - margin_r << "\" height=\"" << height - margin_t - margin_b
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks_for(ax.lo, ax.hi)) {
        const double px = ax.to_px(t, margin_l, width - margin_r);
        out << "<line x1=\"" << px << "\" y1=\"" << height - margin_b << "\" x2=\"" << px
            << "\" y2=\"" << height - margin_b + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << height - margin_b + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(t) << "</text>\n";
    }
    for (double t : ticks_for(ay.lo, ay.hi)) {
        const double py = ay.to_px(t, height - margin_b, margin_t);
        out << "<line x1=\"" << margin_l - 5 << "\" y1=\"" << py << "\" x2=\"" << margin_l
            << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << margin_l - 8 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(t) << "</text>\n";
    }
    out << "</g>\n";
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    if (series.empty()) throw std::invalid_argument("write_line_plot: no series");
    Axis ax;
    Axis ay;
    ax.lo = ax.hi = series[0].xs.at(0);
    ay.lo = ay.hi = series[0].ys.at(0);
    for (const auto& s : series) {
        for (double v : s.xs) {
            ax.lo = std::min(ax.lo, v);
            ax.hi = std::max(ax.hi, v);
        }
        for (double v : s.ys) {
            ay.lo = std::min(ay.lo, v);
            ay.hi = std::max(ay.hi, v);
        }
    }
    if (ay.hi == ay.lo) {
        ay.hi += 1.0;
        ay.lo -= 1.0;
    }
    const double pad = 0.05 * (ay.hi - ay.lo);
    ay.lo -= pad;
    ay.hi += pad;

    auto out = open_svg(path);
    draw_frame(out, title, x_label, y_label, ax, ay);
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            out << num(ax.to_px(s.xs[i], margin_l, width - margin_r)) << ','
                << num(ay.to_px(s.ys[i], height - margin_b, margin_t)) << ' ';
        }
        out << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.xs.size(); ++i)
                out << "<circle cx=\"" << num(ax.to_px(s.xs[i], margin_l, width - margin_r))
                    << "\" cy=\"" << num(ay.to_px(s.ys[i], height - margin_b, margin_t))
                    << "\" r=\"2\" fill=\"" << s.colour << "\"/>\n";
    }
    double ly = margin_t + 16.0;
    for (const auto& s : series) {
        out << "<line x1=\"" << width - margin_r - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << width - margin_r - 120 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.colour
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - margin_r - 114 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18.0;
    }
    out << "</svg>\n";
}

void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<double>& values, std::size_t nx, std::size_t ny,
                   double x_min, double x_max, double y_min, double y_max,
                   const std::string& x_label, const std::string& y_label) {
    if (values.size() != nx * ny) throw std::invalid_argument("write_heatmap: size mismatch");
    double peak = 0.0;
    double vmin = values[0];
    std::size_t imin = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        peak = std::max(peak, std::abs(values[i]));
        if (values[i] < vmin) {
            vmin = values[i];
            imin = i;
        }
    }
    if (peak == 0.0) peak = 1.0;

    Axis ax{x_min, x_max};
    Axis ay{y_min, y_max};
    auto out = open_svg(path);
    draw_frame(out, title, x_label, y_label, ax, ay);

    const double cell_w = (width - margin_l - margin_r) / static_cast<double>(nx);
    const double cell_h = (height - margin_t - margin_b) / static_cast<double>(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t k = 0; k < ny; ++k) {
            const double v = values[i * ny + k] / peak;  // [-1, 1]
            // diverging palette: blue for negative, red for positive
            const double a = std::min(1.0, std::abs(v));
            const int other = static_cast<int>(std::lround(255.0 * (1.0 - a)));
            int r = 255;
            int g = other;
            int b = other;
            if (v < 0.0) {
                r = other;
                g = other;
                b = 255;
            }
            const double px = margin_l + static_cast<double>(i) * cell_w;
            const double py = margin_t + static_cast<double>(ny - 1 - k) * cell_h;
            out << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\""
                << num(cell_w + 0.5) << "\" height=\"" << num(cell_h + 0.5) << "\" fill=\"rgb("
                << r << ',' << g << ',' << b << ")\"/>\n";
        }
    }
    const std::size_t ix = imin / ny;
    const std::size_t ik = imin % ny;
    const double mx = x_min + (static_cast<double>(ix) + 0.5) * (x_max - x_min) /
                                  static_cast<double>(nx);
    const double my = y_min + (static_cast<double>(ik) + 0.5) * (y_max - y_min) /
                                  static_cast<double>(ny);
    out << "<circle cx=\"" << num(ax.to_px(mx, margin_l, width - margin_r)) << "\" cy=\""
        << num(ay.to_px(my, height - margin_b, margin_t))
        << "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << margin_l + 6 << "\" y=\"" << margin_t + 16
        << "\" font-family=\"sans-serif\" font-size=\"12\">min " << format_double(vmin)
        << " at (" << num(mx) << ", " << num(my) << ")</text>\n";
    out << "</svg>\n";
}

void write_band_diagram(const std::filesystem::path& path, const std::string& title,
                        const std::vector<Band>& bands) {
    if (bands.empty()) throw std::invalid_argument("write_band_diagram: no bands");
    Axis ay;
    ay.lo = bands[0].lo;
    ay.hi = bands[0].hi;
    for (const auto& b : bands) {
        ay.lo = std::min(ay.lo, b.lo);
        ay.hi = std::max(ay.hi, b.hi);
    }
    Axis ax{0.0, static_cast<double>(bands.size())};
    auto out = open_svg(path);
    draw_frame(out, title, "state", "energy", ax, ay);
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const double x0 = ax.to_px(static_cast<double>(i) + 0.15, margin_l, width - margin_r);
        const double x1 = ax.to_px(static_cast<double>(i) + 0.85, margin_l, width - margin_r);
        const double y0 = ay.to_px(bands[i].hi, height - margin_b, margin_t);
        const double y1 = ay.to_px(bands[i].lo, height - margin_b, margin_t);
        out << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
            << "\" height=\"" << num(y1 - y0)
            << "\" fill=\"#1f77b4\" fill-opacity=\"0.35\" stroke=\"#1f77b4\"/>\n";
        const double yc = ay.to_px(0.5 * (bands[i].lo + bands[i].hi), height - margin_b,
                                   margin_t);
        out << "<text x=\"" << num(0.5 * (x0 + x1)) << "\" y=\"" << num(yc + 4)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << bands[i].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace nwlab::io
