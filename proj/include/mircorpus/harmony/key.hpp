#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/harmony/chords.hpp"

namespace mircorpus::harmony {

enum class Mode { major, minor };

struct KeyEstimate {
    int tonic = 0;
    Mode mode = Mode::major;
    double score = 0.0;  // Pearson correlation of the winning profile

    friend bool operator==(const KeyEstimate& a, const KeyEstimate& b) noexcept
    {
        return a.tonic == b.tonic && a.mode == b.mode;
    }
};

/// Krumhansl-Kessler probe-tone profiles, tonic first.
extern const std::array<double, 12> kKrumhanslMajor;
extern const std::array<double, 12> kKrumhanslMinor;

double pearson(std::span<const double> a, std::span<const double> b);

/// Best of 24 rotated profiles; ties go to major, then the lowest tonic.
KeyEstimate best_key(const std::array<double, 12>& pitch_class_counts);

/// Key per chord from unweighted chord-tone counts over chords i-context..i+context.
/// Throws on an empty sequence or any no-chord entries.
std::vector<KeyEstimate> local_key(std::span<const Chord> chords, int context = 5);
std::vector<KeyEstimate> local_key(std::span<const ChordEvent> events, int context = 5);

/// Drops no-chord events.
std::vector<ChordEvent> without_no_chord(std::span<const ChordEvent> events);

/// "C:maj-key", "A:min-key".
std::string key_label(const KeyEstimate& key);

/// Key file mirroring the lab layout, one line per chord event.
void write_key_lab(const std::filesystem::path& path, std::span<const ChordEvent> events,
                   std::span<const KeyEstimate> keys);

}  // namespace mircorpus::harmony
