#include <algorithm>
#include <cmath>
#include <numeric>

#include "mircorpus/features/rhythm.hpp"

namespace mircorpus::features {

namespace {

constexpr int kOnsetFft = 2048;
constexpr int kThresholdRadius = 7;
constexpr double kThresholdDelta = 0.05;
constexpr double kPeakRatioCap = 1000.0;
constexpr double kMetricalTolerance = 0.05;
constexpr double kRelativeFluxFloor = 1e-3;

double band_distance(double bpm)
{
    return std::max({0.0, 100.0 - bpm, bpm - 120.0});
}

}  // namespace

std::vector<double> onset_detection_function(std::span<const double> samples)
{
    std::vector<double> padded(samples.size() + kOnsetFft, 0.0);
    std::copy(samples.begin(), samples.end(), padded.begin() + kOnsetFft / 2);
    const auto spec = signal::stft_complex(padded, kOnsetFft, kOnsetHop);

    std::vector<double> odf(spec.frames.size(), 0.0);
    std::vector<double> prev(spec.frames.front().size(), 0.0);
    std::vector<double> cur(prev.size());
    for (std::size_t j = 0; j < spec.frames.size(); ++j) {
        double flux = 0.0, level = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            cur[k] = std::abs(spec.frames[j][k]);
            flux += std::max(0.0, cur[k] - prev[k]);
            level += cur[k];
        }
        // steady spectra leave only rounding-level flux; treat it as no change
        odf[j] = j == 0 || flux < kRelativeFluxFloor * level ? 0.0 : flux;
        std::swap(prev, cur);
    }
    return odf;
}

std::vector<long> pick_onsets(std::span<const double> odf)
{
    std::vector<long> onsets;
    if (odf.size() < 3)
        return onsets;
    const double delta = kThresholdDelta * *std::max_element(odf.begin(), odf.end());
    std::vector<double> window;
    for (std::size_t j = 1; j + 1 < odf.size(); ++j) {
        if (!(odf[j] > odf[j - 1] && odf[j] >= odf[j + 1]))
            continue;
        const std::size_t lo = j >= kThresholdRadius ? j - kThresholdRadius : 0;
        const std::size_t hi = std::min(odf.size(), j + kThresholdRadius + 1);
        window.assign(odf.begin() + static_cast<std::ptrdiff_t>(lo), odf.begin() + static_cast<std::ptrdiff_t>(hi));
        const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        if (odf[j] > *mid + delta)
            onsets.push_back(static_cast<long>(j) * kOnsetHop);
    }
    return onsets;
}

OnsetStats onset_stats(std::span<const long> onsets, long end, long window)
{
    const auto first = std::upper_bound(onsets.begin(), onsets.end(), end - window);
    const auto last = std::upper_bound(onsets.begin(), onsets.end(), end);
    OnsetStats s;
    s.count = static_cast<double>(std::distance(first, last));
    if (s.count < 2.0)
        return s;
    std::vector<double> iois;
    for (auto it = first + 1; it != last; ++it)
        iois.push_back(static_cast<double>(*it - *(it - 1)) / signal::kSampleRate);
    const double n = static_cast<double>(iois.size());
    s.ioi_mean = std::accumulate(iois.begin(), iois.end(), 0.0) / n;
    double var = 0.0;
    for (double d : iois)
        var += (d - s.ioi_mean) * (d - s.ioi_mean);
    s.ioi_std = std::sqrt(var / n);
    return s;
}

std::vector<double> beat_histogram(std::span<const double> odf)
{
    std::vector<double> h(kMaxBeatLag - kMinBeatLag + 1, 0.0);
    if (odf.empty())
        return h;
    const double mean = std::accumulate(odf.begin(), odf.end(), 0.0) / static_cast<double>(odf.size());
    for (int lag = kMinBeatLag; lag <= kMaxBeatLag; ++lag) {
        double acc = 0.0;
        for (std::size_t n = static_cast<std::size_t>(lag); n < odf.size(); ++n)
            acc += (odf[n] - mean) * (odf[n - static_cast<std::size_t>(lag)] - mean);
        h[static_cast<std::size_t>(lag - kMinBeatLag)] = std::max(acc, 0.0);
    }
    return h;
}

double choose_metrical_level(double bpm)
{
    if (!(bpm > 0.0))
        return 0.0;
    while (bpm < 70.0)
        bpm *= 2.0;
    while (bpm >= 140.0)
        bpm /= 2.0;
    double best = bpm;
    for (double candidate : {bpm * 2.0, bpm / 2.0})
        if (band_distance(candidate) < band_distance(best))
            best = candidate;
    return best;
}

BeatStats beat_stats(std::span<const double> histogram)
{
    BeatStats s;
    const double sum = std::accumulate(histogram.begin(), histogram.end(), 0.0);
    if (!(sum > 0.0))
        return s;

    for (double h : histogram) {
        const double p = h / sum;
        if (p > 0.0)
            s.entropy -= p * std::log(p);
        s.simpson += p * p;
    }

    std::vector<std::size_t> peaks;
    const std::size_t n = histogram.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool rises = i == 0 || histogram[i] > histogram[i - 1];
        const bool falls = i + 1 == n || histogram[i] >= histogram[i + 1];
        if (rises && falls && histogram[i] > 0.0)
            peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t a, std::size_t b) { return histogram[a] > histogram[b]; });

    const double top = histogram[peaks.front()];
    s.peak_ratio = peaks.size() > 1 ? top / std::max(histogram[peaks[1]], top / kPeakRatioCap)
                                    : kPeakRatioCap;

    const double strongest = static_cast<double>(peaks.front() + kMinBeatLag);
    double mass = 0.0, metrical = 0.0;
    for (std::size_t r = 0; r < peaks.size() && r < 5; ++r) {
        const double lag = static_cast<double>(peaks[r] + kMinBeatLag);
        const double h = histogram[peaks[r]];
        mass += h;
        bool related = false;
        for (int m = 1; m <= 4 && !related; ++m) {
            const double mult = strongest * m, div = strongest / m;
            related = std::abs(lag - mult) <= kMetricalTolerance * mult ||
                      std::abs(lag - div) <= kMetricalTolerance * div;
        }
        if (related)
            metrical += h;
    }
    s.metricity = metrical / mass;

    // parabolic interpolation of the strongest lag
    const std::size_t i = peaks.front();
    double lag = strongest;
    if (i > 0 && i + 1 < n) {
        const double a = histogram[i - 1], b = histogram[i], c = histogram[i + 1];
        const double den = a - 2.0 * b + c;
        if (den != 0.0)
            lag += 0.5 * (a - c) / den;
    }
    s.tempo = choose_metrical_level(60.0 * signal::kSampleRate / kOnsetHop / lag);
    return s;
}

}  // namespace mircorpus::features
