#include "scx/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace scx {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw ValidationError("table row arity " + std::to_string(row.size()) +
                              " does not match header arity " + std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw IoError("to_chars failed");
    return std::string(buf, ptr);
}

std::string to_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const ResultTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    const std::string body = to_csv(table);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw IoError("write failed for " + path);
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 24;
constexpr int kMarginBottom = 50;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_tick(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

void write_svg_plot(const std::vector<SvgSeries>& series, const std::string& x_label,
                    const std::string& y_label, bool log_x, bool log_y,
                    const std::string& path) {
    // Collect transformed points.
    std::vector<SvgSeries> data;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    bool any = false;
    for (const auto& s : series) {
        SvgSeries t{s.label, {}};
        for (auto [x, y] : s.points) {
            if (log_x) {
                if (!(x > 0)) continue;
                x = std::log10(x);
            }
            if (log_y) {
                if (!(y > 0)) continue;
                y = std::log10(y);
            }
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!any) {
                x_min = x_max = x;
                y_min = y_max = y;
                any = true;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
            t.points.emplace_back(x, y);
        }
        data.push_back(std::move(t));
    }
    if (!any) {
        x_min = y_min = 0;
        x_max = y_max = 1;
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto sx = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // Four ticks per axis.
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        const double px = sx(fx);
        const double py = sy(fy);
        svg << "<line x1=\"" << px << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << px
            << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << (log_x ? "1e" : "")
            << fmt_tick(fx) << "</text>\n";
        svg << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << (log_y ? "1e" : "") << fmt_tick(fy)
            << "</text>\n";
    }
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    int ci = 0;
    for (const auto& s : data) {
        const char* color = kSeriesColors[ci % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) svg << sx(x) << ',' << sy(y) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << kMarginLeft + plot_w - 6 << "\" y=\""
            << kMarginTop + 16 + 16 * ci << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
            << color << "\">" << s.label << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    const std::string body = svg.str();
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace scx
