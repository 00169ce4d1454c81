#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace triq::cli {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string curve_csv(const DecayCurve& curve, const std::vector<double>& protection) {
    if (!protection.empty() && protection.size() != curve.size())
        throw std::invalid_argument("curve_csv: protection column length mismatch");
    std::string out(kCsvHeader);
    if (!protection.empty()) out += ",protection_factor";
    out += '\n';
    for (std::size_t k = 0; k < curve.size(); ++k) {
        out += num(curve.times[k]);
        for (double v : {curve.n1[k], curve.n2[k], curve.n3[k], curve.n3_tri[k], curve.fidelity[k], curve.purity[k]})
            out += "," + num(v);
        if (!protection.empty()) out += "," + num(protection[k]);
        out += '\n';
    }
    return out;
}

std::vector<double> protection_factor(const DecayCurve& p, const DecayCurve& u) {
    if (p.size() != u.size()) throw std::invalid_argument("protection_factor: curves differ in length");
    std::vector<double> f(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (u.n3_tri[k] > 0.0) f[k] = p.n3_tri[k] / u.n3_tri[k];
        else f[k] = p.n3_tri[k] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    return f;
}

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 60;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            if (!any) {
                x0 = x1 = s.x[k];
                y0 = y1 = s.y[k];
                any = true;
            }
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    }
    y0 = std::min(y0, 0.0);
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
                      "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) + "</text>\n";
    out += "<rect x=\"" + coord(L) + "\" y=\"" + coord(T) + "\" width=\"" + coord(W - L - R) + "\" height=\"" +
           coord(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", xv);
        out += "<text x=\"" + coord(px(xv)) + "\" y=\"" + coord(H - B + 18) + "\" text-anchor=\"middle\">" + buf +
               "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", yv);
        out += "<text x=\"" + coord(L - 8) + "\" y=\"" + coord(py(yv) + 4) + "\" text-anchor=\"end\">" + buf +
               "</text>\n";
    }
    out += "<text x=\"" + coord((L + W - R) / 2) + "\" y=\"" + coord(H - 18) + "\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + coord((T + H - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           coord((T + H - B) / 2) + ")\">" + escape(y_label) + "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
        if (s.dashed) out += " stroke-dasharray=\"6 4\"";
        out += " points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            out += coord(px(s.x[k])) + "," + coord(py(s.y[k])) + " ";
        }
        out += "\"/>\n";
        const double ly = T + 16 + 16.0 * static_cast<double>(i);
        out += "<line x1=\"" + coord(W - R - 150) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(W - R - 125) +
               "\" y2=\"" + coord(ly) + "\" stroke=\"" + s.color + "\"" +
               (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
        out += "<text x=\"" + coord(W - R - 120) + "\" y=\"" + coord(ly + 4) + "\">" + escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace triq::cli
