#include "mircorpus/harmony/transitions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::harmony {

namespace {

constexpr std::array<const char*, 12> kNumerals{"I", "IIb", "II", "IIIb", "III", "IV",
                                                "Vb", "V", "VIb", "VI", "VIIb", "VII"};

const char* roman_suffix(ChordType type)
{
    switch (type) {
    case ChordType::major:
    case ChordType::minor: return "";
    case ChordType::dominant7:
    case ChordType::minor7: return "7";
    case ChordType::major7: return "maj7";
    case ChordType::diminished: return "dim";
    case ChordType::major6:
    case ChordType::minor6: return "6";
    case ChordType::minor7b5: return "7b5";
    case ChordType::augmented: return "+";
    }
    return "";
}

RelativeChord relative(const Chord& chord, int tonic)
{
    return {(chord.root - tonic + 12) % 12, chord.type};
}

RelativeChord relative_from_index(int index)
{
    return {index / kChordTypeCount, static_cast<ChordType>(index % kChordTypeCount)};
}

}  // namespace

TransitionHistogram::TransitionHistogram() : counts_(kTransitionCells, 0) {}

void TransitionHistogram::add(RelativeChord from, RelativeChord to, long count)
{
    if (count < 0) throw Error(ErrorCode::invalid_argument, "transition counts must be non-negative");
    counts_[static_cast<std::size_t>(cell(from, to))] += count;
    total_ += count;
}

long TransitionHistogram::count(RelativeChord from, RelativeChord to) const
{
    return counts_[static_cast<std::size_t>(cell(from, to))];
}

void TransitionHistogram::merge(const TransitionHistogram& other)
{
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

TransitionHistogram transition_histogram(std::span<const Chord> chords, std::span<const KeyEstimate> keys)
{
    if (chords.size() != keys.size())
        throw Error(ErrorCode::length_mismatch, "transition_histogram: " + std::to_string(chords.size()) +
                                                    " chords but " + std::to_string(keys.size()) + " keys");
    TransitionHistogram hist;
    for (std::size_t i = 1; i < chords.size(); ++i) {
        if (chords[i - 1].is_none() || chords[i].is_none()) continue;
        if (!(keys[i - 1] == keys[i])) continue;
        hist.add(relative(chords[i - 1], keys[i].tonic), relative(chords[i], keys[i].tonic));
    }
    return hist;
}

TransitionHistogram transition_histogram(std::span<const ChordEvent> events, std::span<const KeyEstimate> keys)
{
    std::vector<Chord> chords;
    chords.reserve(events.size());
    for (const auto& e : events) chords.push_back(e.chord);
    return transition_histogram(std::span<const Chord>(chords), keys);
}

std::string roman_numeral(RelativeChord chord)
{
    std::string numeral = kNumerals.at(static_cast<std::size_t>(chord.rel_root));
    if (is_minor_quality(chord.type))
        for (char& c : numeral)
            if (c == 'I' || c == 'V') c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return numeral + roman_suffix(chord.type);
}

std::string example_in_c(RelativeChord chord) { return chord_name({chord.rel_root, chord.type}); }

std::vector<TransitionRow> rank_transitions(const TransitionHistogram& hist, int n)
{
    if (hist.total() <= 0) throw Error(ErrorCode::insufficient_data, "rank_transitions: empty histogram");
    std::vector<int> cells;
    for (int c = 0; c < kTransitionCells; ++c)
        if (hist.count_cell(c) > 0) cells.push_back(c);
    std::stable_sort(cells.begin(), cells.end(),
                     [&](int a, int b) { return hist.count_cell(a) > hist.count_cell(b); });
    if (n > 0 && static_cast<std::size_t>(n) < cells.size()) cells.resize(static_cast<std::size_t>(n));

    std::vector<TransitionRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        TransitionRow row;
        row.rank = static_cast<int>(i + 1);
        row.count = hist.count_cell(cells[i]);
        row.proportion = static_cast<double>(row.count) / static_cast<double>(hist.total());
        row.from = relative_from_index(cells[i] / kChordClasses);
        row.to = relative_from_index(cells[i] % kChordClasses);
        row.roman = roman_numeral(row.from) + "->" + roman_numeral(row.to);
        row.example_in_c = example_in_c(row.from) + "->" + example_in_c(row.to);
        rows.push_back(std::move(row));
    }
    return rows;
}

double plagal_perfect_ratio(const TransitionHistogram& hist)
{
    const RelativeChord tonic{0, ChordType::major};
    const long plagal = hist.count({5, ChordType::major}, tonic);
    const long perfect = hist.count({7, ChordType::major}, tonic);
    if (perfect == 0) throw Error(ErrorCode::undefined, "plagal/perfect ratio: no V->I transitions");
    return static_cast<double>(plagal) / static_cast<double>(perfect);
}

void write_transition_report(const std::filesystem::path& path, std::span<const TransitionRow> rows)
{
    std::vector<csv::Row> table;
    table.push_back({"rank", "count", "proportion", "start_root", "end_root", "start_type", "end_type", "roman",
                     "example_in_C"});
    for (const auto& r : rows)
        table.push_back({std::to_string(r.rank), std::to_string(r.count), csv::sig(r.proportion, 3),
                         std::to_string(r.from.rel_root), std::to_string(r.to.rel_root), long_name(r.from.type),
                         long_name(r.to.type), r.roman, r.example_in_c});
    csv::write(path, table);
}

std::array<long, kChordTypeCount> chord_type_histogram(std::span<const ChordEvent> events)
{
    std::array<long, kChordTypeCount> counts{};
    for (const auto& e : events)
        if (!e.chord.is_none()) ++counts[static_cast<std::size_t>(e.chord.type)];
    return counts;
}

std::array<long, 12> chord_root_histogram(std::span<const ChordEvent> events)
{
    std::array<long, 12> counts{};
    for (const auto& e : events)
        if (!e.chord.is_none()) ++counts[static_cast<std::size_t>(e.chord.root)];
    return counts;
}

std::map<int, std::array<double, kChordTypeCount>> type_usage_by_year(std::span<const YearChords> songs)
{
    std::map<int, std::array<long, kChordTypeCount>> tallies;
    for (const auto& song : songs) {
        auto& t = tallies[song.year];
        const auto h = chord_type_histogram(song.events);
        for (std::size_t i = 0; i < h.size(); ++i) t[i] += h[i];
    }
    std::map<int, std::array<double, kChordTypeCount>> usage;
    for (const auto& [year, t] : tallies) {
        const long total = std::accumulate(t.begin(), t.end(), 0L);
        auto& row = usage[year];
        for (std::size_t i = 0; i < t.size(); ++i)
            row[i] = total > 0 ? static_cast<double>(t[i]) / static_cast<double>(total) : 0.0;
    }
    return usage;
}

double harmonic_rhythm(std::span<const ChordEvent> events)
{
    std::vector<double> starts;
    for (const auto& e : events)
        if (!e.chord.is_none()) starts.push_back(e.start);
    if (starts.size() < 2)
        throw Error(ErrorCode::insufficient_data, "harmonic_rhythm: need at least two chords");
    double sum = 0.0;
    for (std::size_t i = 1; i < starts.size(); ++i) sum += starts[i] - starts[i - 1];
    return sum / static_cast<double>(starts.size() - 1);
}

}  // namespace mircorpus::harmony
