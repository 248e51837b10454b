#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mircorpus/features/spectral.hpp"

namespace mircorpus::features {

namespace {

constexpr int kBarkBands = 40;
constexpr double kLoudnessExponent = 0.23;

double bark(double hz)
{
    return 13.0 * std::atan(0.00076 * hz) + 3.5 * std::atan((hz / 7500.0) * (hz / 7500.0));
}

double hz_to_mel(double hz)
{
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel)
{
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double total(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

}  // namespace

double band_energy(std::span<const double> power, BinGrid grid, double lo_hz, double hi_hz)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        const double f = grid.frequency(k);
        if (f >= lo_hz && f < hi_hz)
            sum += power[k];
    }
    return sum;
}

LoudnessModel::LoudnessModel(BinGrid grid)
{
    const std::size_t bins = static_cast<std::size_t>(grid.fft_size / 2 + 1);
    const double top = bark(grid.sample_rate / 2.0);
    band_of_bin_.assign(bins, -1);
    for (std::size_t k = 1; k < bins; ++k) {
        const int band = static_cast<int>(bark(grid.frequency(k)) / top * kBarkBands);
        band_of_bin_[k] = std::min(band, kBarkBands - 1);
    }
}

double LoudnessModel::operator()(std::span<const double> power) const
{
    std::array<double, kBarkBands> bands{};
    for (std::size_t k = 0; k < power.size() && k < band_of_bin_.size(); ++k)
        if (band_of_bin_[k] >= 0)
            bands[static_cast<std::size_t>(band_of_bin_[k])] += power[k];
    double sum = 0.0;
    for (double e : bands)
        sum += std::pow(e, kLoudnessExponent);
    return sum;
}

MfccModel::MfccModel(BinGrid grid)
{
    const std::size_t bins = static_cast<std::size_t>(grid.fft_size / 2 + 1);
    const double top = hz_to_mel(grid.sample_rate / 2.0);
    std::vector<double> edges(kBands + 2);
    for (int i = 0; i < kBands + 2; ++i)
        edges[static_cast<std::size_t>(i)] = mel_to_hz(top * i / (kBands + 1));

    filters_.assign(kBands, std::vector<double>(bins, 0.0));
    for (int b = 0; b < kBands; ++b) {
        const double lo = edges[static_cast<std::size_t>(b)];
        const double mid = edges[static_cast<std::size_t>(b) + 1];
        const double hi = edges[static_cast<std::size_t>(b) + 2];
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = grid.frequency(k);
            double w = 0.0;
            if (f > lo && f <= mid)
                w = (f - lo) / (mid - lo);
            else if (f > mid && f < hi)
                w = (hi - f) / (hi - mid);
            filters_[static_cast<std::size_t>(b)][k] = w;
        }
    }
}

std::vector<double> MfccModel::operator()(std::span<const double> power) const
{
    std::array<double, kBands> logs{};
    for (std::size_t b = 0; b < filters_.size(); ++b) {
        double e = 0.0;
        for (std::size_t k = 0; k < power.size(); ++k)
            e += filters_[b][k] * power[k];
        logs[b] = std::log(std::max(e, 1e-10));
    }
    std::vector<double> coeffs(kCoefficients);
    const double scale = std::sqrt(2.0 / kBands);
    for (int c = 1; c <= kCoefficients; ++c) {
        double acc = 0.0;
        for (int m = 0; m < kBands; ++m)
            acc += logs[static_cast<std::size_t>(m)] * std::cos(std::numbers::pi * c * (m + 0.5) / kBands);
        coeffs[static_cast<std::size_t>(c - 1)] = scale * acc;
    }
    return coeffs;
}

double spectral_centroid(std::span<const double> magnitude, BinGrid grid)
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < magnitude.size(); ++k) {
        num += grid.frequency(k) * magnitude[k];
        den += magnitude[k];
    }
    return den > 0.0 ? num / den : 0.0;
}

double spectral_percentile(std::span<const double> power, BinGrid grid, double fraction)
{
    const double target = fraction * total(power);
    if (!(target > 0.0))
        return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        acc += power[k];
        if (acc >= target)
            return grid.frequency(k);
    }
    return grid.frequency(power.size() - 1);
}

double spectral_flatness(std::span<const double> power)
{
    if (power.empty())
        return 0.0;
    const double peak = *std::max_element(power.begin(), power.end());
    if (!(peak > 0.0))
        return 0.0;
    const double floor = peak * 1e-12;
    double log_sum = 0.0, sum = 0.0;
    for (double p : power) {
        const double v = std::max(p, floor);
        log_sum += std::log(v);
        sum += v;
    }
    const double n = static_cast<double>(power.size());
    return std::exp(log_sum / n) / (sum / n);
}

double spectral_entropy(std::span<const double> power)
{
    const double sum = total(power);
    if (!(sum > 0.0) || power.size() < 2)
        return 0.0;
    double h = 0.0;
    for (double p : power) {
        if (p > 0.0) {
            const double q = p / sum;
            h -= q * std::log(q);
        }
    }
    return h / std::log(static_cast<double>(power.size()));
}

double js_divergence(std::span<const double> p, std::span<const double> q)
{
    double d = 0.0;
    for (std::size_t k = 0; k < p.size() && k < q.size(); ++k) {
        const double m = 0.5 * (p[k] + q[k]);
        if (p[k] > 0.0)
            d += 0.5 * p[k] * std::log2(p[k] / m);
        if (q[k] > 0.0)
            d += 0.5 * q[k] * std::log2(q[k] / m);
    }
    return std::max(d, 0.0);
}

double sethares_dissonance(double f1, double a1, double f2, double a2)
{
    const double s = 0.24 / (0.021 * std::min(f1, f2) + 19.0);
    const double df = std::abs(f2 - f1);
    return a1 * a2 * (std::exp(-3.5 * s * df) - std::exp(-5.75 * s * df));
}

double sensory_dissonance(std::span<const double> magnitude, BinGrid grid)
{
    struct Peak {
        double freq;
        double amp;
    };
    std::vector<Peak> peaks;
    for (std::size_t k = 1; k + 1 < magnitude.size(); ++k) {
        const double m = magnitude[k];
        if (m > magnitude[k - 1] && m >= magnitude[k + 1]) {
            // parabolic refinement of the peak position and height
            const double a = magnitude[k - 1], c = magnitude[k + 1];
            const double den = a - 2.0 * m + c;
            const double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
            peaks.push_back({grid.frequency(k) + off * grid.sample_rate / grid.fft_size,
                             m - 0.25 * (a - c) * off});
        }
    }
    if (peaks.size() < 2)
        return 0.0;
    std::sort(peaks.begin(), peaks.end(), [](const Peak& x, const Peak& y) { return x.amp > y.amp; });
    const double strongest = peaks.front().amp;
    std::erase_if(peaks, [&](const Peak& p) { return p.amp < 0.05 * strongest; });
    if (peaks.size() > 10)
        peaks.resize(10);

    double d = 0.0;
    for (std::size_t i = 0; i < peaks.size(); ++i)
        for (std::size_t j = i + 1; j < peaks.size(); ++j)
            d += sethares_dissonance(peaks[i].freq, peaks[i].amp / strongest, peaks[j].freq,
                                     peaks[j].amp / strongest);
    return d;
}

void daubechies4(std::vector<double>& data, int levels)
{
    const double r3 = std::sqrt(3.0), norm = 4.0 * std::numbers::sqrt2;
    const double c0 = (1.0 + r3) / norm, c1 = (3.0 + r3) / norm;
    const double c2 = (3.0 - r3) / norm, c3 = (1.0 - r3) / norm;

    std::vector<double> tmp(data.size());
    std::size_t n = data.size();
    for (int level = 0; level < levels && n >= 4; ++level, n /= 2) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) {
            const double x0 = data[2 * i], x1 = data[2 * i + 1];
            const double x2 = data[(2 * i + 2) % n], x3 = data[(2 * i + 3) % n];
            tmp[i] = c0 * x0 + c1 * x1 + c2 * x2 + c3 * x3;
            tmp[half + i] = c3 * x0 - c2 * x1 + c1 * x2 - c0 * x3;
        }
        std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), data.begin());
    }
}

double transientness(std::span<const double> frame)
{
    std::vector<double> w(frame.begin(), frame.end());
    daubechies4(w, 5);
    double all = 0.0, fine = 0.0;
    const std::size_t fine_start = w.size() / 4;  // detail levels 1 and 2
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double e = w[i] * w[i];
        all += e;
        if (i >= fine_start)
            fine += e;
    }
    return all > 0.0 ? fine / all : 0.0;
}

}  // namespace mircorpus::features
