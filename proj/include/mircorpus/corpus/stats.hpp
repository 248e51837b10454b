#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/features/features.hpp"

namespace mircorpus::corpus {

struct TrendFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double p = 1.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// Regularised incomplete beta I_x(a, b), continued fraction (modified Lentz).
double incomplete_beta(double a, double b, double x);

/// Two-sided P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

/// Ordinary least squares of y on x with Pearson r and its two-sided p.
/// Throws insufficient_data for n < 3, invalid_argument for constant x.
/// Constant y gives r = 0, p = 1.
TrendFit trend_fit(std::span<const double> x, std::span<const double> y);

/// Ranks from 1, ties averaged.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks; 0 when either side has no rank spread.
double spearman(std::span<const double> a, std::span<const double> b);

/// Spearman over matching tracks of two versions of the same record.
double compare_versions(std::span<const features::SongSummary> a, std::span<const features::SongSummary> b,
                        std::size_t feature);

struct NamedTrend {
    std::size_t feature = 0;
    TrendFit fit;
};

/// feature,name,n,slope,intercept,r,p,r2; reals in scientific notation.
void write_trend_report(const std::filesystem::path& path, std::span<const NamedTrend> trends);

}  // namespace mircorpus::corpus
