#include "mircorpus/harmony/chords.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::harmony {

namespace {

struct TypeInfo {
    std::vector<int> intervals;
    const char* lab;
    const char* long_name;
    const char* short_suffix;
    bool minor_quality;
};

const std::array<TypeInfo, kChordTypeCount>& type_table()
{
    static const std::array<TypeInfo, kChordTypeCount> table{{
        {{0, 4, 7}, "maj", "major", "", false},
        {{0, 3, 7}, "min", "minor", "m", true},
        {{0, 4, 7, 10}, "7", "dominant 7th", "7", false},
        {{0, 4, 7, 11}, "maj7", "major 7th", "maj7", false},
        {{0, 3, 7, 10}, "min7", "minor 7th", "m7", true},
        {{0, 3, 6}, "dim", "diminished", "dim", true},
        {{0, 4, 7, 9}, "maj6", "major 6th", "6", false},
        {{0, 3, 7, 9}, "min6", "minor 6th", "m6", true},
        {{0, 3, 6, 10}, "min7b5", "minor 7th b5", "m7b5", true},
        {{0, 4, 8}, "aug", "augmented", "aug", false},
    }};
    return table;
}

const TypeInfo& info(ChordType type) { return type_table().at(static_cast<std::size_t>(type)); }

constexpr std::array<const char*, 12> kSharpNames{"C", "C#", "D", "D#", "E", "F",
                                                  "F#", "G", "G#", "A", "A#", "B"};
constexpr std::array<const char*, 12> kFlatNames{"C", "Db", "D", "Eb", "E", "F",
                                                 "Gb", "G", "Ab", "A", "Bb", "B"};

constexpr double kChromaLowHz = 55.0;
constexpr double kChromaHighHz = 1760.0;

int pitch_class_of(double hz)
{
    const double midi = 69.0 + 12.0 * std::log2(hz / 440.0);
    const long nearest = std::lround(midi);
    return static_cast<int>(((nearest % 12) + 12) % 12);
}

// Median over a window clamped to the sequence ends.
std::vector<double> clamped_median(const std::vector<double>& x, int kernel)
{
    const int n = static_cast<int>(x.size());
    const int half = kernel / 2;
    std::vector<double> out(x.size()), window;
    window.reserve(static_cast<std::size_t>(kernel));
    for (int i = 0; i < n; ++i) {
        window.clear();
        for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j)
            window.push_back(x[static_cast<std::size_t>(j)]);
        const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        double m = *mid;
        if (window.size() % 2 == 0) {
            const double below = *std::max_element(window.begin(), mid);
            m = 0.5 * (m + below);
        }
        out[static_cast<std::size_t>(i)] = m;
    }
    return out;
}

struct Run {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
    Chord chord;
    std::size_t length() const { return last - first + 1; }
};

void coalesce(std::vector<Run>& runs)
{
    std::vector<Run> merged;
    for (const Run& r : runs) {
        if (!merged.empty() && merged.back().chord == r.chord)
            merged.back().last = r.last;
        else
            merged.push_back(r);
    }
    runs = std::move(merged);
}

}  // namespace

const std::vector<int>& chord_intervals(ChordType type) { return info(type).intervals; }
const char* lab_suffix(ChordType type) { return info(type).lab; }
const char* long_name(ChordType type) { return info(type).long_name; }
const char* short_suffix(ChordType type) { return info(type).short_suffix; }
bool is_minor_quality(ChordType type) { return info(type).minor_quality; }

std::optional<ChordType> chord_type_from_lab(const std::string& suffix)
{
    for (ChordType t : kAllChordTypes)
        if (suffix == lab_suffix(t)) return t;
    return std::nullopt;
}

const char* pitch_name_sharp(int pitch_class) { return kSharpNames.at(static_cast<std::size_t>(pitch_class)); }
const char* pitch_name_flat(int pitch_class) { return kFlatNames.at(static_cast<std::size_t>(pitch_class)); }

int pitch_class_from_name(const std::string& name)
{
    for (int pc = 0; pc < 12; ++pc)
        if (name == kSharpNames[static_cast<std::size_t>(pc)] || name == kFlatNames[static_cast<std::size_t>(pc)])
            return pc;
    return -1;
}

Chord Chord::from_index(int index)
{
    if (index < 0) return none();
    if (index >= 12 * kChordTypeCount)
        throw Error(ErrorCode::invalid_argument, "chord index out of range: " + std::to_string(index));
    return {index / kChordTypeCount, static_cast<ChordType>(index % kChordTypeCount)};
}

std::vector<int> Chord::pitch_classes() const
{
    if (is_none()) return {};
    std::vector<int> pcs;
    for (int iv : chord_intervals(type)) pcs.push_back((root + iv) % 12);
    return pcs;
}

std::string lab_label(const Chord& chord)
{
    if (chord.is_none()) return "N";
    return std::string(pitch_name_sharp(chord.root)) + ":" + lab_suffix(chord.type);
}

Chord parse_lab_label(const std::string& label)
{
    if (label == "N") return Chord::none();
    const auto colon = label.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorCode::parse, "bad chord label '" + label + "'");
    const int root = pitch_class_from_name(label.substr(0, colon));
    const auto type = chord_type_from_lab(label.substr(colon + 1));
    if (root < 0 || !type)
        throw Error(ErrorCode::parse, "bad chord label '" + label + "'");
    return {root, *type};
}

Chord parse_chord_name(const std::string& name)
{
    if (name == "N") return Chord::none();
    std::size_t split = name.size() >= 2 && (name[1] == '#' || name[1] == 'b') ? 2 : 1;
    const int root = pitch_class_from_name(name.substr(0, split));
    if (root < 0) throw Error(ErrorCode::parse, "bad chord name '" + name + "'");
    const std::string suffix = name.substr(split);
    for (ChordType t : kAllChordTypes)
        if (suffix == short_suffix(t)) return {root, t};
    if (suffix == "+") return {root, ChordType::augmented};
    throw Error(ErrorCode::parse, "bad chord name '" + name + "'");
}

std::string chord_name(const Chord& chord)
{
    if (chord.is_none()) return "N";
    return std::string(pitch_name_flat(chord.root)) + short_suffix(chord.type);
}

ChromaTrail chroma(const signal::Spectrogram& spec)
{
    const double scale = 16.0 / (3.0 * spec.fft_size * static_cast<double>(spec.fft_size));
    const double bin_hz = static_cast<double>(spec.sample_rate) / spec.fft_size;
    const auto lo = static_cast<std::size_t>(std::ceil(kChromaLowHz / bin_hz));
    const auto hi = std::min(spec.bins() - 2, static_cast<std::size_t>(std::floor(kChromaHighHz / bin_hz)));

    ChromaTrail trail;
    trail.frame_period = static_cast<double>(spec.hop) / spec.sample_rate;
    trail.frames.reserve(spec.frames.size());
    for (const auto& mags : spec.frames) {
        ChromaFrame frame;
        for (std::size_t k = lo; k <= hi; ++k) frame.energy += mags[k] * mags[k] * scale;
        // Each local maximum carries its three-bin power to the pitch class of
        // its interpolated frequency.
        for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi; ++k) {
            if (!(mags[k] > mags[k - 1] && mags[k] >= mags[k + 1])) continue;
            const double a = std::log(mags[k - 1] + 1e-300);
            const double b = std::log(mags[k] + 1e-300);
            const double c = std::log(mags[k + 1] + 1e-300);
            const double denom = a - 2.0 * b + c;
            const double offset = denom < 0.0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
            const double hz = (static_cast<double>(k) + offset) * bin_hz;
            if (hz < kChromaLowHz || hz > kChromaHighHz) continue;
            const double p = (mags[k - 1] * mags[k - 1] + mags[k] * mags[k] + mags[k + 1] * mags[k + 1]) * scale;
            frame.pcp[static_cast<std::size_t>(pitch_class_of(hz))] += p;
        }
        double total = 0.0;
        for (double c : frame.pcp) total += c;
        if (total > 0.0)
            for (double& c : frame.pcp) c /= total;
        trail.frames.push_back(frame);
    }
    return trail;
}

Chroma chord_template(const Chord& chord)
{
    Chroma t{};
    if (chord.is_none()) return t;
    for (int pc : chord.pitch_classes()) t[static_cast<std::size_t>(pc)] = 1.0;
    t[static_cast<std::size_t>(chord.root)] = kRootWeight;
    double norm = 0.0;
    for (double v : t) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : t) v /= norm;
    return t;
}

Chord match_frame(const ChromaFrame& frame)
{
    static const std::vector<Chroma> templates = [] {
        std::vector<Chroma> out;
        for (int i = 0; i < 12 * kChordTypeCount; ++i) out.push_back(chord_template(Chord::from_index(i)));
        return out;
    }();

    if (frame.energy < kNoChordEnergy) return Chord::none();
    int best = -1;
    double best_score = -1.0;
    for (int i = 0; i < static_cast<int>(templates.size()); ++i) {
        double s = 0.0;
        for (std::size_t pc = 0; pc < 12; ++pc) s += frame.pcp[pc] * templates[static_cast<std::size_t>(i)][pc];
        if (s > best_score + 1e-12) {
            best_score = s;
            best = i;
        }
    }
    return best_score > 0.0 ? Chord::from_index(best) : Chord::none();
}

std::vector<ChordEvent> detect_chords(const ChromaTrail& trail)
{
    const std::size_t n = trail.frames.size();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "detect_chords: empty chroma trail");

    std::vector<ChromaFrame> smooth(n);
    std::vector<double> channel(n);
    for (std::size_t pc = 0; pc < 12; ++pc) {
        for (std::size_t i = 0; i < n; ++i) channel[i] = trail.frames[i].pcp[pc];
        const auto m = clamped_median(channel, kChromaSmoothing);
        for (std::size_t i = 0; i < n; ++i) smooth[i].pcp[pc] = m[i];
    }
    for (std::size_t i = 0; i < n; ++i) channel[i] = trail.frames[i].energy;
    const auto energy = clamped_median(channel, kChromaSmoothing);
    for (std::size_t i = 0; i < n; ++i) smooth[i].energy = energy[i];

    std::vector<Run> runs;
    for (std::size_t i = 0; i < n; ++i) runs.push_back({i, i, match_frame(smooth[i])});
    coalesce(runs);

    const auto min_frames = static_cast<std::size_t>(std::ceil(kMinEventSeconds / trail.frame_period - 1e-9));
    while (runs.size() > 1) {
        auto shortest = std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.length() < min_frames; });
        if (shortest == runs.end()) break;
        if (shortest == runs.begin())
            std::next(shortest)->first = shortest->first;
        else
            std::prev(shortest)->last = shortest->last;
        runs.erase(shortest);
        coalesce(runs);
    }

    std::vector<ChordEvent> events;
    for (const Run& r : runs)
        events.push_back({static_cast<double>(r.first) * trail.frame_period,
                          static_cast<double>(r.last + 1) * trail.frame_period, r.chord});
    return events;
}

std::vector<ChordEvent> detect_chords(const signal::AudioBuffer& audio)
{
    return detect_chords(chroma(signal::stft_aligned(audio, kChromaFftSize)));
}

void write_lab(const std::filesystem::path& path, const std::vector<ChordEvent>& events)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    for (const auto& e : events)
        out << csv::fixed(e.start, 6) << '\t' << csv::fixed(e.end, 6) << '\t' << lab_label(e.chord) << '\n';
}

std::vector<ChordEvent> read_lab(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
    std::vector<ChordEvent> events;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string start, end, label;
        if (!std::getline(fields, start, '\t') || !std::getline(fields, end, '\t') || !std::getline(fields, label))
            throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(line_no) + ": expected 3 tab-separated fields");
        const std::string where = path.string() + ":" + std::to_string(line_no);
        events.push_back({csv::to_double(start, where), csv::to_double(end, where), parse_lab_label(label)});
    }
    return events;
}

}  // namespace mircorpus::harmony
