#pragma once
// Output emission: CSV tables (17 significant digits), newline-delimited
// JSON verdicts, and self-contained deterministic SVG line plots.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spinlab/common.hpp"

namespace spinlab {

struct VerdictRecord {
    std::string suite;
    std::string case_id;
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;
    bool holds = false;
    std::int64_t runtime_ms = 0;
};

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

enum class PlotStyle { linear, loglog };

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    PlotStyle style = PlotStyle::linear;
    // Slope of a dashed log-log guide line anchored at the first point of the
    // first series; NaN disables it.
    double guide_slope = std::numeric_limits<double>::quiet_NaN();
};

// Throws EmptySeries when nothing would be drawn.
std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec,
                       const std::string& header_comment);

class ReportWriter {
  public:
    ReportWriter(std::string out_dir, std::uint64_t config_hash, std::int64_t seed);

    const std::string& dir() const { return out_dir_; }
    std::string header_comment() const;

    void write_csv(const std::string& name, const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows) const;
    void write_verdicts(const std::string& name,
                        const std::vector<VerdictRecord>& verdicts) const;
    void write_json(const std::string& name, const std::string& json_text) const;
    void write_svg(const std::string& name, const std::vector<Series>& series,
                   const PlotSpec& spec) const;

  private:
    std::string out_dir_;
    std::uint64_t config_hash_;
    std::int64_t seed_;
};

std::string format_float(double v);  // %.17g with '.' decimal separator

}  // namespace spinlab
