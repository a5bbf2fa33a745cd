#include "spinlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace spinlab {

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

constexpr const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac < 1.5) return mag;
    if (frac < 3.5) return 2 * mag;
    if (frac < 7.5) return 5 * mag;
    return 10 * mag;
}

}  // namespace

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec,
                       const std::string& header_comment) {
    bool any = false;
    for (const auto& s : series) any = any || !s.points.empty();
    if (!any) throw EmptySeries("plot '" + spec.title + "' has no points");

    const double W = 880, H = 560;
    const double ml = 80, mr = 160, mt = 50, mb = 60;
    const bool loglog = spec.style == PlotStyle::loglog;

    auto tx = [&](double x) { return loglog ? std::log10(x) : x; };
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (loglog && (x <= 0 || y <= 0)) continue;
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, tx(y));
            y1 = std::max(y1, tx(y));
        }
    if (!(x0 <= x1)) throw EmptySeries("no drawable points for " + spec.title);
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;

    auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (tx(y) - y0) / (y1 - y0) * (H - mt - mb); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"560\" "
           "viewBox=\"0 0 880 560\">\n";
    svg += "<!-- " + header_comment + " -->\n";
    svg += "<rect width=\"880\" height=\"560\" fill=\"white\"/>\n";
    svg += "<text x=\"440\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
           "font-family=\"sans-serif\">" + spec.title + "</text>\n";

    // Axes box.
    svg += "<rect x=\"" + fmt("%.2f", ml) + "\" y=\"" + fmt("%.2f", mt) + "\" width=\"" +
           fmt("%.2f", W - ml - mr) + "\" height=\"" + fmt("%.2f", H - mt - mb) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    // Ticks: decades for loglog, nice steps for linear.
    auto tick_label = [&](double v) { return loglog ? fmt("%.6g", std::pow(10.0, v)) : fmt("%.6g", v); };
    auto emit_xtick = [&](double v) {
        const double sx = ml + (v - x0) / (x1 - x0) * (W - ml - mr);
        svg += "<line x1=\"" + fmt("%.2f", sx) + "\" y1=\"" + fmt("%.2f", H - mb) +
               "\" x2=\"" + fmt("%.2f", sx) + "\" y2=\"" + fmt("%.2f", H - mb + 6) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", sx) + "\" y=\"" + fmt("%.2f", H - mb + 22) +
               "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
               tick_label(v) + "</text>\n";
    };
    auto emit_ytick = [&](double v) {
        const double sy = H - mb - (v - y0) / (y1 - y0) * (H - mt - mb);
        svg += "<line x1=\"" + fmt("%.2f", ml - 6) + "\" y1=\"" + fmt("%.2f", sy) +
               "\" x2=\"" + fmt("%.2f", ml) + "\" y2=\"" + fmt("%.2f", sy) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", ml - 10) + "\" y=\"" + fmt("%.2f", sy + 4) +
               "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
               tick_label(v) + "</text>\n";
    };
    if (loglog) {
        for (double v = std::ceil(x0); v <= std::floor(x1) + 1e-12; v += 1.0) emit_xtick(v);
        for (double v = std::ceil(y0); v <= std::floor(y1) + 1e-12; v += 1.0) emit_ytick(v);
    } else {
        const double sx = nice_step(x1 - x0), sy = nice_step(y1 - y0);
        for (double v = std::ceil(x0 / sx) * sx; v <= x1 + 1e-12; v += sx) emit_xtick(v);
        for (double v = std::ceil(y0 / sy) * sy; v <= y1 + 1e-12; v += sy) emit_ytick(v);
    }

    svg += "<text x=\"" + fmt("%.2f", ml + (W - ml - mr) / 2) + "\" y=\"" +
           fmt("%.2f", H - 14) +
           "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" +
           spec.x_label + "</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt("%.2f", mt + (H - mt - mb) / 2) +
           "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 20 " + fmt("%.2f", mt + (H - mt - mb) / 2) + ")\">" +
           spec.y_label + "</text>\n";

    // Optional guide line through the first point of the first series.
    if (std::isfinite(spec.guide_slope) && loglog && !series.empty() &&
        !series.front().points.empty()) {
        const auto [gx, gy] = series.front().points.front();
        if (gx > 0 && gy > 0) {
            const double lx0 = std::log10(gx), ly0 = std::log10(gy);
            double la = x0, lb = x1;
            // Clip the guide segment to the vertical extent of the axes box.
            if (spec.guide_slope != 0) {
                const double t_lo = lx0 + (y0 - ly0) / spec.guide_slope;
                const double t_hi = lx0 + (y1 - ly0) / spec.guide_slope;
                la = std::max(la, std::min(t_lo, t_hi));
                lb = std::min(lb, std::max(t_lo, t_hi));
            }
            const double ya = ly0 + spec.guide_slope * (la - lx0);
            const double yb = ly0 + spec.guide_slope * (lb - lx0);
            auto pxx = [&](double v) { return ml + (v - x0) / (x1 - x0) * (W - ml - mr); };
            auto pyy = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };
            svg += "<line x1=\"" + fmt("%.2f", pxx(la)) + "\" y1=\"" + fmt("%.2f", pyy(ya)) +
                   "\" x2=\"" + fmt("%.2f", pxx(lb)) + "\" y2=\"" + fmt("%.2f", pyy(yb)) +
                   "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
            svg += "<text x=\"" + fmt("%.2f", pxx(lb) - 6) + "\" y=\"" +
                   fmt("%.2f", pyy(yb) - 6) +
                   "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" "
                   "fill=\"#999999\">slope " + fmt("%.3g", spec.guide_slope) + "</text>\n";
        }
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        std::string pts;
        for (auto [x, y] : series[i].points) {
            if (loglog && (x <= 0 || y <= 0)) continue;
            pts += fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y)) + " ";
        }
        if (pts.empty()) continue;
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
               kPalette[i % 8] + "\" stroke-width=\"1.5\"/>\n";
        const double ly = mt + 18 + 18 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt("%.2f", W - mr + 10) + "\" y1=\"" + fmt("%.2f", ly - 4) +
               "\" x2=\"" + fmt("%.2f", W - mr + 34) + "\" y2=\"" + fmt("%.2f", ly - 4) +
               "\" stroke=\"" + kPalette[i % 8] + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", W - mr + 40) + "\" y=\"" + fmt("%.2f", ly) +
               "\" font-size=\"12\" font-family=\"sans-serif\">" + series[i].label +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

ReportWriter::ReportWriter(std::string out_dir, std::uint64_t config_hash,
                           std::int64_t seed)
    : out_dir_(std::move(out_dir)), config_hash_(config_hash), seed_(seed) {
    std::filesystem::create_directories(out_dir_);
}

std::string ReportWriter::header_comment() const {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "spinlab v%s config=%016llx seed=%lld", kToolVersion,
                  static_cast<unsigned long long>(config_hash_),
                  static_cast<long long>(seed_));
    return buf;
}

void ReportWriter::write_csv(const std::string& name,
                             const std::vector<std::string>& columns,
                             const std::vector<std::vector<double>>& rows) const {
    std::ofstream out(out_dir_ + "/" + name, std::ios::binary);
    out << "# " << header_comment() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_float(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void ReportWriter::write_verdicts(const std::string& name,
                                  const std::vector<VerdictRecord>& verdicts) const {
    std::ofstream out(out_dir_ + "/" + name, std::ios::binary);
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash_));
    nlohmann::json meta{{"type", "meta"},
                        {"version", kToolVersion},
                        {"config_hash", hash_hex},
                        {"seed", seed_}};
    out << meta.dump() << "\n";
    for (const auto& v : verdicts) {
        nlohmann::json j{{"suite", v.suite},   {"case", v.case_id}, {"lhs", v.lhs},
                         {"rhs", v.rhs},       {"ratio", v.ratio},  {"holds", v.holds},
                         {"runtime_ms", v.runtime_ms}};
        out << j.dump() << "\n";
    }
}

void ReportWriter::write_json(const std::string& name, const std::string& json_text) const {
    std::ofstream out(out_dir_ + "/" + name, std::ios::binary);
    out << json_text;
}

void ReportWriter::write_svg(const std::string& name, const std::vector<Series>& series,
                             const PlotSpec& spec) const {
    std::ofstream out(out_dir_ + "/" + name, std::ios::binary);
    out << render_svg(series, spec, header_comment());
}

}  // namespace spinlab
