#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/harmony/chords.hpp"
#include "mircorpus/harmony/key.hpp"

namespace mircorpus::harmony {

inline constexpr int kChordClasses = 12 * kChordTypeCount;           // 120
inline constexpr int kTransitionCells = kChordClasses * kChordClasses;  // 14400

/// A chord expressed relative to the local tonic.
struct RelativeChord {
    int rel_root = 0;
    ChordType type = ChordType::major;
    int index() const noexcept { return rel_root * kChordTypeCount + static_cast<int>(type); }
};

/// Functional chord-bigram counts over the 14400 cells.
class TransitionHistogram {
public:
    TransitionHistogram();

    static int cell(RelativeChord from, RelativeChord to) noexcept
    {
        return from.index() * kChordClasses + to.index();
    }

    void add(RelativeChord from, RelativeChord to, long count = 1);
    long count(RelativeChord from, RelativeChord to) const;
    long count_cell(int cell) const { return counts_.at(static_cast<std::size_t>(cell)); }
    long total() const noexcept { return total_; }
    void merge(const TransitionHistogram& other);

    friend bool operator==(const TransitionHistogram& a, const TransitionHistogram& b)
    {
        return a.total_ == b.total_ && a.counts_ == b.counts_;
    }

private:
    std::vector<long> counts_;
    long total_ = 0;
};

/// Counts adjacent pairs that share the same key estimate; pairs with
/// differing keys or a no-chord are skipped. Throws length_mismatch.
TransitionHistogram transition_histogram(std::span<const Chord> chords,
                                         std::span<const KeyEstimate> keys);
TransitionHistogram transition_histogram(std::span<const ChordEvent> events,
                                         std::span<const KeyEstimate> keys);

struct TransitionRow {
    int rank = 0;
    long count = 0;
    double proportion = 0.0;
    RelativeChord from;
    RelativeChord to;
    std::string roman;       // "IV->I"
    std::string example_in_c;  // "F->C"
};

/// Nonzero cells by count descending, ties by cell index; n <= 0 returns all.
std::vector<TransitionRow> rank_transitions(const TransitionHistogram& hist, int n);

/// count(IV->I) / count(V->I) over major chords; throws undefined when V->I is 0.
double plagal_perfect_ratio(const TransitionHistogram& hist);

/// "IV", "VIb", "iv", "Imaj7", "IIIb6", ...
std::string roman_numeral(RelativeChord chord);
std::string example_in_c(RelativeChord chord);

void write_transition_report(const std::filesystem::path& path, std::span<const TransitionRow> rows);

// ---------------------------------------------------------------------------
// Aggregate statistics

std::array<long, kChordTypeCount> chord_type_histogram(std::span<const ChordEvent> events);
std::array<long, 12> chord_root_histogram(std::span<const ChordEvent> events);

struct YearChords {
    int year = 0;
    std::vector<ChordEvent> events;
};

/// Proportion of each chord type among each year's events (rows sum to 1 when nonempty).
std::map<int, std::array<double, kChordTypeCount>> type_usage_by_year(std::span<const YearChords> songs);

/// Mean gap in seconds between successive chord starts, no-chord events ignored.
/// Throws insufficient_data with fewer than two chords.
double harmonic_rhythm(std::span<const ChordEvent> events);

}  // namespace mircorpus::harmony
