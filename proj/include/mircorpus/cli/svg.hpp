#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/corpus/similarity.hpp"
#include "mircorpus/corpus/stats.hpp"

// Standalone SVG plots. Every data item is one element carrying a
// class attribute ("cell", "point", "trail") so outputs can be counted.
namespace mircorpus::cli {

std::string xml_escape(const std::string& text);

/// Gray level 255 for the smallest distance down to 0 for the largest.
int heat_gray(double value, double max_value);

/// One shaded <rect class="cell"> per matrix entry with its distance printed
/// at 4 decimals; smaller distances are lighter.
std::string heatmap_svg(const corpus::SimilarityMatrix& matrix, const std::string& title);

/// One <circle class="point"> per (x, y) pair and the fitted line.
std::string scatter_svg(std::span<const double> x, std::span<const double> y,
                        const corpus::TrendFit& fit, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

struct Trail {
    std::string label;
    std::vector<double> values;  // already scaled to [0, 1]
};

/// One <polyline class="trail"> per trail inside a group whose user units
/// are the data units: trail i is drawn at y = value + i * offset.
std::string stacked_trails_svg(std::span<const Trail> trails, double offset, double time_step,
                               const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mircorpus::cli
