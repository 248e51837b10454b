#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "mircorpus/signal/audio.hpp"

namespace mircorpus::features {

inline constexpr std::size_t kFeatureCount = 41;

using FeatureVector = std::array<double, kFeatureCount>;

// Feature numbering of the 41-dimensional frame.
namespace feature {
enum : std::size_t {
    loudness = 0,
    dissonance = 1,
    energy_low = 2,
    energy_mid = 3,
    energy_high = 4,
    mfcc_first = 5,   // 12 coefficients, 5..16
    mfcc_last = 16,
    centroid = 17,
    percentile_50 = 18,
    percentile_90 = 19,
    flatness = 20,
    js_divergence = 21,
    entropy = 22,
    transientness = 23,
    harmonicity = 24,
    percussiveness = 25,
    perc_onset_density = 26,
    perc_ioi_mean = 27,
    perc_ioi_std = 28,
    perc_beat_entropy = 29,
    perc_beat_ratio = 30,
    perc_beat_simpson = 31,
    perc_beat_metricity = 32,
    onset_density = 33,
    ioi_mean = 34,
    ioi_std = 35,
    beat_entropy = 36,
    beat_ratio = 37,
    beat_simpson = 38,
    beat_metricity = 39,
    tempo = 40,
};
}  // namespace feature

const char* feature_name(std::size_t index);

struct FeatureFrame {
    double t = 0.0;  // seconds
    FeatureVector values{};
};

/// Frames at the STFT hop (1024 / 44100 s) in time order.
struct FeatureTrail {
    std::string song_id;
    std::vector<FeatureFrame> frames;

    /// frames.size() * hop duration; the span covered by the trail.
    double duration() const noexcept;
};

struct SongSummary {
    std::string song_id;
    FeatureVector means{};
};

/// Frame period of every trail produced by extract_features.
inline constexpr double kFramePeriod = 1024.0 / signal::kSampleRate;

/// Memory (onset, beat, divergence) features look back this far and are zero
/// until this much audio has elapsed.
inline constexpr double kMemorySeconds = 2.0;

/// Computes all 41 features per 1024-sample hop. Throws too_short below 2 s.
FeatureTrail extract_features(const signal::AudioBuffer& buffer, std::string song_id = {});

/// Means over [t, t + window) every `hop` seconds while t + window <= duration.
std::vector<FeatureFrame> windowed_means(const FeatureTrail& trail, double window = 2.0,
                                         double hop = 1.0);

/// Per-feature arithmetic mean; tempo ignores its zero "no beat" sentinel.
SongSummary song_summary(const FeatureTrail& trail);

// CSV interchange: trail `t,f0..f40`; summaries `song_id,f0..f40`; 9 significant digits.
void write_trail_csv(const std::filesystem::path& path, const FeatureTrail& trail);
FeatureTrail read_trail_csv(const std::filesystem::path& path, std::string song_id = {});
void write_summaries_csv(const std::filesystem::path& path, const std::vector<SongSummary>& rows);
std::vector<SongSummary> read_summaries_csv(const std::filesystem::path& path);

}  // namespace mircorpus::features
