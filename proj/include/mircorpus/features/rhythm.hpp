#pragma once

#include <span>
#include <vector>

#include "mircorpus/signal/spectrum.hpp"

namespace mircorpus::features {

/// Onset detection runs at 100 frames per second.
inline constexpr int kOnsetHop = 441;

/// Half-wave-rectified spectral flux of centred 2048-sample Hann frames every
/// kOnsetHop samples. Element j is centred on sample j * kOnsetHop. Flux below
/// 0.1% of the frame's summed magnitude is zeroed.
std::vector<double> onset_detection_function(std::span<const double> samples);

/// Peak picking: local maxima above the median of +-7 neighbours plus 5% of the
/// global maximum. Returns sample positions of onsets.
std::vector<long> pick_onsets(std::span<const double> odf);

struct OnsetStats {
    double count = 0.0;
    double ioi_mean = 0.0;  // seconds
    double ioi_std = 0.0;   // seconds, population
};

/// Onsets with position in (end - window, end].
OnsetStats onset_stats(std::span<const long> onsets, long end, long window);

inline constexpr int kMinBeatLag = 34;   // 176 bpm at 100 Hz
inline constexpr int kMaxBeatLag = 100;  // 60 bpm

/// Mean-removed autocorrelation of `odf` for lags kMinBeatLag..kMaxBeatLag,
/// negative entries clipped to zero.
std::vector<double> beat_histogram(std::span<const double> odf);

struct BeatStats {
    double entropy = 0.0;
    double peak_ratio = 0.0;
    double simpson = 0.0;
    double metricity = 0.0;
    double tempo = 0.0;  // bpm; 0 when no beat found
};

BeatStats beat_stats(std::span<const double> histogram);

/// Folds bpm into [70, 140) and picks the x1 / x2 / x0.5 level closest to 100-120.
double choose_metrical_level(double bpm);

}  // namespace mircorpus::features
