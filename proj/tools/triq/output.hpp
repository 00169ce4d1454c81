#pragma once

#include <triq/measures.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace triq::cli {

inline constexpr std::string_view kCsvHeader = "time_s,N1,N2,N3,N3_tri,fidelity,purity";

// One row per sample, %.12g. `protection` (if non-empty) adds a
// protection_factor column and must match the curve length.
std::string curve_csv(const DecayCurve& curve, const std::vector<double>& protection = {});

// protected / unprotected N3_tri; 1 when both vanish, inf when only the
// unprotected value does.
std::vector<double> protection_factor(const DecayCurve& protected_curve, const DecayCurve& unprotected_curve);

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
    std::string color;
    bool dashed = false;
};

// Minimal line chart: axes box, a few ticks, legend.
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace triq::cli
