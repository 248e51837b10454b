#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mircorpus/signal/spectrum.hpp"

namespace mircorpus::harmony {

enum class ChordType : int {
    major,
    minor,
    dominant7,
    major7,
    minor7,
    diminished,
    major6,
    minor6,
    minor7b5,
    augmented,
};

inline constexpr int kChordTypeCount = 10;
inline constexpr int kNoChord = -1;

inline constexpr std::array<ChordType, kChordTypeCount> kAllChordTypes{
    ChordType::major,      ChordType::minor,  ChordType::dominant7, ChordType::major7,
    ChordType::minor7,     ChordType::diminished, ChordType::major6, ChordType::minor6,
    ChordType::minor7b5,   ChordType::augmented};

/// Pitch classes relative to the root, e.g. dominant7 -> {0, 4, 7, 10}.
const std::vector<int>& chord_intervals(ChordType type);

/// Lab-file suffix: maj, min, 7, maj7, min7, dim, maj6, min6, min7b5, aug.
const char* lab_suffix(ChordType type);
/// Long name used in transition reports, e.g. "major 7th".
const char* long_name(ChordType type);
/// Lead-sheet suffix for example chords: "", "m", "7", "maj7", "m7", ...
const char* short_suffix(ChordType type);
/// Minor-quality chords render lower case in Roman numerals.
bool is_minor_quality(ChordType type);

std::optional<ChordType> chord_type_from_lab(const std::string& suffix);

/// Sharp spelling used in lab files: C, C#, ..., B.
const char* pitch_name_sharp(int pitch_class);
/// Flat spelling used in reports: C, Db, ..., B.
const char* pitch_name_flat(int pitch_class);
/// Accepts sharp or flat spellings (C#, Db, ...). Returns -1 if unknown.
int pitch_class_from_name(const std::string& name);

struct Chord {
    int root = kNoChord;  // 0-11 or kNoChord
    ChordType type = ChordType::major;

    bool is_none() const noexcept { return root == kNoChord; }
    /// 0..119 as root * 10 + type; -1 for no-chord.
    int index() const noexcept { return is_none() ? -1 : root * kChordTypeCount + static_cast<int>(type); }
    static Chord from_index(int index);
    static Chord none() { return {}; }

    /// Pitch classes sounded by this chord (empty for no-chord).
    std::vector<int> pitch_classes() const;

    friend bool operator==(const Chord& a, const Chord& b) noexcept
    {
        return a.root == b.root && (a.is_none() || a.type == b.type);
    }
};

/// "C:maj", "F#:min7", "N".
std::string lab_label(const Chord& chord);
/// Parses lab labels; throws Error{parse}.
Chord parse_lab_label(const std::string& label);
/// Lead-sheet names as used in synthetic progressions: "C", "Am", "G7",
/// "Fmaj7", "Bdim", "Abaug", "Dm7b5", "F6", "Cm6", or "N".
Chord parse_chord_name(const std::string& name);
std::string chord_name(const Chord& chord);

struct ChordEvent {
    double start = 0.0;
    double end = 0.0;
    Chord chord;
};

// ---------------------------------------------------------------------------
// Front end

using Chroma = std::array<double, 12>;

struct ChromaFrame {
    Chroma pcp{};         // L1-normalised, zeros for silence
    double energy = 0.0;  // mean-square energy in 55-1760 Hz
};

struct ChromaTrail {
    std::vector<ChromaFrame> frames;
    double frame_period = 1024.0 / 44100.0;
};

/// Analysis window for chroma; 2048 points cannot separate a minor third
/// around 220 Hz.
inline constexpr int kChromaFftSize = 8192;

/// Spectral peaks between 55 and 1760 Hz, each folded onto the pitch class of
/// its interpolated frequency. Works on any frame size.
ChromaTrail chroma(const signal::Spectrogram& spec);

// ---------------------------------------------------------------------------
// Detection

inline constexpr double kNoChordEnergy = 1e-6;    // -60 dB mean square
inline constexpr int kChromaSmoothing = 9;        // frames
inline constexpr double kMinEventSeconds = 0.2;
inline constexpr double kRootWeight = 1.5;

/// Unit-norm template: chord tones 1, root kRootWeight.
Chroma chord_template(const Chord& chord);

/// Best of the 120 templates by inner product, or no-chord below the energy gate.
Chord match_frame(const ChromaFrame& frame);

/// Median-smooths the chroma, matches every frame, merges runs into events and
/// folds runs shorter than kMinEventSeconds into their predecessor.
std::vector<ChordEvent> detect_chords(const ChromaTrail& trail);

/// stft_aligned(kChromaFftSize) + chroma + detect_chords.
std::vector<ChordEvent> detect_chords(const signal::AudioBuffer& audio);

// ---------------------------------------------------------------------------
// Lab files: start<TAB>end<TAB>label

void write_lab(const std::filesystem::path& path, const std::vector<ChordEvent>& events);
std::vector<ChordEvent> read_lab(const std::filesystem::path& path);

}  // namespace mircorpus::harmony
