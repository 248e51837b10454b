#include "mircorpus/corpus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::corpus {

namespace {

// Continued fraction for the incomplete beta, modified Lentz.
double beta_fraction(double a, double b, double x)
{
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    return h;
}

double mean(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson_r(std::span<const double> x, std::span<const double> y)
{
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0 || std::isnan(x))
        throw Error(ErrorCode::invalid_argument, "incomplete_beta: needs a, b > 0 and 0 <= x <= 1");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
    return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof)
{
    if (!(dof > 0.0)) throw Error(ErrorCode::invalid_argument, "student_t_two_sided: dof must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return std::clamp(incomplete_beta(0.5 * dof, 0.5, x), 0.0, 1.0);
}

TrendFit trend_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw Error(ErrorCode::length_mismatch, "trend_fit: x and y differ in length");
    if (x.size() < 3) throw Error(ErrorCode::insufficient_data, "trend_fit: need at least 3 points");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorCode::invalid_argument, "trend_fit: all x values are equal");

    TrendFit fit;
    fit.n = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (!(syy > 0.0)) {
        fit.slope = 0.0;
        fit.intercept = my;
        return fit;
    }
    fit.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    fit.r2 = fit.r * fit.r;
    const double dof = static_cast<double>(fit.n - 2);
    if (fit.r2 >= 1.0) {
        fit.p = 0.0;
    } else {
        const double t = fit.r * std::sqrt(dof / (1.0 - fit.r2));
        fit.p = student_t_two_sided(t, dof);
    }
    return fit;
}

std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::length_mismatch, "spearman: sequences differ in length");
    if (a.size() < 2) throw Error(ErrorCode::insufficient_data, "spearman: need at least 2 values");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson_r(ra, rb);
}

double compare_versions(std::span<const features::SongSummary> a, std::span<const features::SongSummary> b,
                        std::size_t feature)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::length_mismatch, "compare_versions: track lists differ (" + std::to_string(a.size()) +
                                                    " vs " + std::to_string(b.size()) + ")");
    if (feature >= features::kFeatureCount)
        throw Error(ErrorCode::invalid_argument, "compare_versions: feature index out of range");
    std::vector<double> va, vb;
    for (const auto& s : a) va.push_back(s.means[feature]);
    for (const auto& s : b) vb.push_back(s.means[feature]);
    return spearman(va, vb);
}

void write_trend_report(const std::filesystem::path& path, std::span<const NamedTrend> trends)
{
    std::vector<csv::Row> rows{{"feature", "name", "n", "slope", "intercept", "r", "p", "r2"}};
    for (const auto& t : trends)
        rows.push_back({std::to_string(t.feature), features::feature_name(t.feature), std::to_string(t.fit.n),
                        csv::sci(t.fit.slope), csv::sci(t.fit.intercept), csv::sci(t.fit.r), csv::sci(t.fit.p),
                        csv::sci(t.fit.r2)});
    csv::write(path, rows);
}

}  // namespace mircorpus::corpus
