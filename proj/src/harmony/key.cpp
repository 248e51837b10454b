#include "mircorpus/harmony/key.hpp"

#include <cmath>
#include <fstream>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::harmony {

const std::array<double, 12> kKrumhanslMajor{6.35, 2.23, 3.48, 2.33, 4.38, 4.09,
                                             2.52, 5.19, 2.39, 3.66, 2.29, 2.88};
const std::array<double, 12> kKrumhanslMinor{6.33, 2.68, 3.52, 5.38, 2.60, 3.53,
                                             2.54, 4.75, 3.98, 2.69, 3.34, 3.17};

double pearson(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty())
        throw Error(ErrorCode::length_mismatch, "pearson: vectors differ in length");
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

KeyEstimate best_key(const std::array<double, 12>& counts)
{
    KeyEstimate best{0, Mode::major, -2.0};
    for (Mode mode : {Mode::major, Mode::minor}) {
        const auto& profile = mode == Mode::major ? kKrumhanslMajor : kKrumhanslMinor;
        for (int tonic = 0; tonic < 12; ++tonic) {
            std::array<double, 12> rotated{};
            for (int pc = 0; pc < 12; ++pc)
                rotated[static_cast<std::size_t>(pc)] = profile[static_cast<std::size_t>((pc - tonic + 12) % 12)];
            const double r = pearson(counts, rotated);
            if (r > best.score) best = {tonic, mode, r};
        }
    }
    return best;
}

std::vector<KeyEstimate> local_key(std::span<const Chord> chords, int context)
{
    if (chords.empty()) throw Error(ErrorCode::invalid_argument, "local_key: empty chord sequence");
    if (context < 0) throw Error(ErrorCode::invalid_argument, "local_key: negative context");
    for (const Chord& c : chords)
        if (c.is_none()) throw Error(ErrorCode::invalid_argument, "local_key: no-chord entries must be removed first");

    const auto n = static_cast<std::ptrdiff_t>(chords.size());
    std::vector<KeyEstimate> keys;
    keys.reserve(chords.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::array<double, 12> counts{};
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - context); j <= std::min(n - 1, i + context); ++j)
            for (int pc : chords[static_cast<std::size_t>(j)].pitch_classes()) counts[static_cast<std::size_t>(pc)] += 1.0;
        keys.push_back(best_key(counts));
    }
    return keys;
}

std::vector<KeyEstimate> local_key(std::span<const ChordEvent> events, int context)
{
    std::vector<Chord> chords;
    chords.reserve(events.size());
    for (const auto& e : events) chords.push_back(e.chord);
    return local_key(std::span<const Chord>(chords), context);
}

std::vector<ChordEvent> without_no_chord(std::span<const ChordEvent> events)
{
    std::vector<ChordEvent> out;
    for (const auto& e : events)
        if (!e.chord.is_none()) out.push_back(e);
    return out;
}

std::string key_label(const KeyEstimate& key)
{
    return std::string(pitch_name_sharp(key.tonic)) + (key.mode == Mode::major ? ":maj-key" : ":min-key");
}

void write_key_lab(const std::filesystem::path& path, std::span<const ChordEvent> events,
                   std::span<const KeyEstimate> keys)
{
    if (events.size() != keys.size())
        throw Error(ErrorCode::length_mismatch, "write_key_lab: events and keys differ in length");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    for (std::size_t i = 0; i < events.size(); ++i)
        out << csv::fixed(events[i].start, 6) << '\t' << csv::fixed(events[i].end, 6) << '\t'
            << key_label(keys[i]) << '\n';
}

}  // namespace mircorpus::harmony
