#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nwlab::io {

/// Minimal deterministic SVG plotting: enough for the density overlays,
/// drift comparisons, Wigner heatmaps and the energy-band diagram.

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
    std::string colour = "#1f77b4";
    bool markers = false;
};

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

/// Row-major values[ix * ny + ip]; a diverging palette centred at zero.
/// The minimum value and its location are annotated on the plot.
void write_heatmap(const std::filesystem::path& path, const std::string& title,
                   const std::vector<double>& values, std::size_t nx, std::size_t ny,
                   double x_min, double x_max, double y_min, double y_max,
                   const std::string& x_label, const std::string& y_label);

struct Band {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
};

/// Horizontal stacked intervals; adjacent oscillator bands visibly touch.
void write_band_diagram(const std::filesystem::path& path, const std::string& title,
                        const std::vector<Band>& bands);

}  // namespace nwlab::io
