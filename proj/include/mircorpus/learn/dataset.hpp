#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mircorpus/features/features.hpp"

namespace mircorpus::learn {

struct Segment {
    features::FeatureVector features{};
    int label = 0;
    std::string song_id;
};

struct SegmentDataset {
    std::vector<Segment> rows;
    std::vector<std::string> classes;  // display names, index = label

    std::size_t class_count() const noexcept { return classes.size(); }
    std::vector<std::string> song_ids() const;  // in first-appearance order
};

/// 2 s windowed means at 1 s hops of one song's trail, all carrying `label`.
std::vector<Segment> make_segments(const features::FeatureTrail& trail, int label);

/// Random partition of songs (not rows); train gets round(fraction * songs),
/// clamped so both halves keep at least one song.
std::pair<SegmentDataset, SegmentDataset> song_preserving_split(const SegmentDataset& ds, double fraction,
                                                                std::uint64_t seed);

/// The same split made within each class, so every class with two or more
/// songs lands on both sides; a single-song class goes to training.
std::pair<SegmentDataset, SegmentDataset> stratified_song_split(const SegmentDataset& ds, double fraction,
                                                                std::uint64_t seed);

/// Max-min scaling fitted on one dataset (normally the training half).
class Normalizer {
public:
    static Normalizer fit(const SegmentDataset& ds);
    features::FeatureVector apply(const features::FeatureVector& x) const;
    SegmentDataset apply(const SegmentDataset& ds) const;

private:
    features::FeatureVector lo_{}, scale_{};
};

/// 0 up to 1997, 1 for 2000-2001, 2 from 2003; other years are rejected.
int era_label(int year);
const std::vector<std::string>& era_names();

/// Fraction of matching entries.
double accuracy(std::span<const int> predictions, std::span<const int> labels);
/// "31.208%".
std::string format_percent(double fraction);

/// counts[true][predicted]
using ConfusionMatrix = std::vector<std::vector<long>>;
ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels, std::size_t classes);
void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& matrix,
                         std::span<const std::string> classes);

/// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double unit_uniform(std::uint64_t bits);

}  // namespace mircorpus::learn
