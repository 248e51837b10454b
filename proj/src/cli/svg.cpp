#include "mircorpus/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::cli {

namespace {

constexpr int kCell = 60;
constexpr int kMargin = 120;
constexpr int kPlotW = 480;
constexpr int kPlotH = 320;

std::string num(double v) { return csv::sig(v, 6); }

void header(std::ostringstream& out, int width, int height, const std::string& title)
{
    out << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
        << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")" << height
        << R"(" viewBox="0 0 )" << width << ' ' << height << R"(">)" << '\n'
        << R"(<rect class="background" x="0" y="0" width=")" << width << R"(" height=")" << height
        << R"(" fill="white"/>)" << '\n'
        << R"(<text x=")" << width / 2 << R"(" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">)"
        << xml_escape(title) << "</text>\n";
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    static Range of(std::span<const double> v)
    {
        Range r{v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()),
                v.empty() ? 1.0 : *std::max_element(v.begin(), v.end())};
        if (!(r.hi > r.lo)) {
            r.lo -= 0.5;
            r.hi += 0.5;
        }
        return r;
    }
    double unit(double v) const { return (v - lo) / (hi - lo); }
};

}  // namespace

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

int heat_gray(double value, double max_value)
{
    if (!(max_value > 0.0)) return 255;
    const double t = std::clamp(value / max_value, 0.0, 1.0);
    return static_cast<int>(std::lround(255.0 * (1.0 - t)));
}

std::string heatmap_svg(const corpus::SimilarityMatrix& matrix, const std::string& title)
{
    const int n = static_cast<int>(matrix.size());
    double max_value = 0.0;
    for (const auto& row : matrix.d)
        for (double v : row) max_value = std::max(max_value, v);

    std::ostringstream out;
    const int side = kMargin + n * kCell + 20;
    header(out, side, side, title);
    for (int i = 0; i < n; ++i) {
        const auto label = xml_escape(matrix.labels[static_cast<std::size_t>(i)]);
        out << R"(<text class="row-label" x=")" << kMargin - 6 << R"(" y=")" << kMargin + i * kCell + kCell / 2 + 4
            << R"(" text-anchor="end" font-family="sans-serif" font-size="11">)" << label << "</text>\n";
        out << R"(<text class="col-label" x=")" << kMargin + i * kCell + kCell / 2 << R"(" y=")" << kMargin - 6
            << R"(" text-anchor="middle" font-family="sans-serif" font-size="11">)" << label << "</text>\n";
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = matrix.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const int g = heat_gray(v, max_value);
            const int x = kMargin + j * kCell;
            const int y = kMargin + i * kCell;
            out << R"(<rect class="cell" x=")" << x << R"(" y=")" << y << R"(" width=")" << kCell
                << R"(" height=")" << kCell << R"(" fill="rgb()" << g << ',' << g << ',' << g
                << R"~()" stroke="#888"/>)~" << '\n';
            out << R"(<text class="value" x=")" << x + kCell / 2 << R"(" y=")" << y + kCell / 2 + 4
                << R"(" text-anchor="middle" font-family="sans-serif" font-size="10" fill=")"
                << (g < 128 ? "white" : "black") << R"(">)" << csv::fixed(v, 4) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string scatter_svg(std::span<const double> x, std::span<const double> y, const corpus::TrendFit& fit,
                        const std::string& title, const std::string& x_label, const std::string& y_label)
{
    if (x.size() != y.size()) throw Error(ErrorCode::length_mismatch, "scatter: x and y differ in length");
    const auto rx = Range::of(x);
    const auto ry = Range::of(y);
    const int left = 80;
    const int top = 40;
    auto px = [&](double v) { return left + rx.unit(v) * kPlotW; };
    auto py = [&](double v) { return top + (1.0 - ry.unit(v)) * kPlotH; };

    std::ostringstream out;
    header(out, left + kPlotW + 40, top + kPlotH + 60, title);
    out << R"(<rect class="frame" x=")" << left << R"(" y=")" << top << R"(" width=")" << kPlotW
        << R"(" height=")" << kPlotH << R"(" fill="none" stroke="black"/>)" << '\n';
    out << R"(<text x=")" << left + kPlotW / 2 << R"(" y=")" << top + kPlotH + 40
        << R"(" text-anchor="middle" font-family="sans-serif" font-size="12">)" << xml_escape(x_label) << "</text>\n";
    out << R"(<text x="20" y=")" << top + kPlotH / 2 << R"(" transform="rotate(-90 20 )" << top + kPlotH / 2
        << R"~()" text-anchor="middle" font-family="sans-serif" font-size="12">)~" << xml_escape(y_label) << "</text>\n";
    out << R"(<text x=")" << left << R"(" y=")" << top + kPlotH + 20 << R"(" font-family="sans-serif" font-size="10">)"
        << num(rx.lo) << "</text>\n";
    out << R"(<text x=")" << left + kPlotW << R"(" y=")" << top + kPlotH + 20
        << R"(" text-anchor="end" font-family="sans-serif" font-size="10">)" << num(rx.hi) << "</text>\n";
    out << R"(<text x=")" << left - 4 << R"(" y=")" << top + kPlotH
        << R"(" text-anchor="end" font-family="sans-serif" font-size="10">)" << num(ry.lo) << "</text>\n";
    out << R"(<text x=")" << left - 4 << R"(" y=")" << top + 10
        << R"(" text-anchor="end" font-family="sans-serif" font-size="10">)" << num(ry.hi) << "</text>\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << R"(<circle class="point" cx=")" << num(px(x[i])) << R"(" cy=")" << num(py(y[i]))
            << R"(" r="3" fill="steelblue"/>)" << '\n';
    const double y0 = fit.intercept + fit.slope * rx.lo;
    const double y1 = fit.intercept + fit.slope * rx.hi;
    out << R"(<line class="fit" x1=")" << num(px(rx.lo)) << R"(" y1=")" << num(py(y0)) << R"(" x2=")"
        << num(px(rx.hi)) << R"(" y2=")" << num(py(y1)) << R"(" stroke="crimson" stroke-width="1.5"/>)" << '\n';
    out << R"(<text x=")" << left + kPlotW << R"(" y=")" << top - 6
        << R"(" text-anchor="end" font-family="sans-serif" font-size="10">r = )" << csv::fixed(fit.r, 3)
        << ", p = " << csv::sci(fit.p, 3) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string stacked_trails_svg(std::span<const Trail> trails, double offset, double time_step,
                               const std::string& title)
{
    std::size_t longest = 1;
    for (const auto& t : trails) longest = std::max(longest, t.values.size());
    const double span_x = std::max(time_step * static_cast<double>(longest - 1), time_step);
    const double span_y = 1.0 + offset * static_cast<double>(trails.empty() ? 0 : trails.size() - 1);
    const int left = 120;
    const int top = 40;
    const int height = std::max(kPlotH, static_cast<int>(trails.size()) * 30);
    const double sx = kPlotW / span_x;
    const double sy = height / (span_y > 0.0 ? span_y : 1.0);

    std::ostringstream out;
    header(out, left + kPlotW + 40, top + height + 40, title);
    for (std::size_t i = 0; i < trails.size(); ++i) {
        const double base = top + height - (static_cast<double>(i) * offset) * sy;
        out << R"(<text class="trail-label" x=")" << left - 6 << R"(" y=")" << num(base)
            << R"(" text-anchor="end" font-family="sans-serif" font-size="10">)" << xml_escape(trails[i].label)
            << "</text>\n";
    }
    out << R"(<g class="trails" transform="translate()" << left << ' ' << top + height << ") scale(" << num(sx)
        << ' ' << num(-sy) << R"~()">)~" << '\n';
    for (std::size_t i = 0; i < trails.size(); ++i) {
        out << R"(<polyline class="trail" data-offset=")" << num(static_cast<double>(i) * offset)
            << R"(" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke" points=")";
        for (std::size_t k = 0; k < trails[i].values.size(); ++k) {
            if (k) out << ' ';
            out << num(time_step * static_cast<double>(k)) << ','
                << num(trails[i].values[k] + static_cast<double>(i) * offset);
        }
        out << R"("/>)" << '\n';
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, path.string() + ": cannot write");
    out << text;
    if (!out) throw Error(ErrorCode::io, path.string() + ": write failed");
}

}  // namespace mircorpus::cli
