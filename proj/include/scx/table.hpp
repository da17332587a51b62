#pragma once

#include <string>
#include <vector>

#include "scx/errors.hpp"

namespace scx {

/// Rectangular numeric table. Complex quantities are emitted as paired
/// <name>_re, <name>_im columns by the callers that assemble the table.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    explicit ResultTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

    void add_row(std::vector<double> row);
};

/// Shortest representation that parses back to the identical double
/// (plain or scientific, whichever std::to_chars selects).
std::string format_double(double v);

std::string to_csv(const ResultTable& table);

void write_csv(const ResultTable& table, const std::string& path);

/// One plotted line: label plus (x, y) samples.
struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal self-contained SVG line plot (polyline + axes + tick labels).
/// Log-scaled axes take log10 of the data; nonpositive values are dropped.
void write_svg_plot(const std::vector<SvgSeries>& series, const std::string& x_label,
                    const std::string& y_label, bool log_x, bool log_y,
                    const std::string& path);

}  // namespace scx
