#include "mircorpus/learn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::learn {

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

std::vector<std::string> SegmentDataset::song_ids() const
{
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const auto& r : rows)
        if (seen.insert(r.song_id).second) ids.push_back(r.song_id);
    return ids;
}

std::vector<Segment> make_segments(const features::FeatureTrail& trail, int label)
{
    std::vector<Segment> out;
    for (const auto& w : features::windowed_means(trail)) out.push_back({w.values, label, trail.song_id});
    return out;
}

namespace {

void shuffle_songs(std::vector<std::string>& songs, std::mt19937_64& rng)
{
    for (std::size_t i = songs.size(); i-- > 1;) {
        const auto j = static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(i + 1));
        std::swap(songs[i], songs[std::min(j, i)]);
    }
}

long train_count(std::size_t songs, double fraction)
{
    const auto n = static_cast<long>(songs);
    return std::clamp(std::lround(fraction * static_cast<double>(n)), 1L, n - 1);
}

std::pair<SegmentDataset, SegmentDataset> partition(const SegmentDataset& ds, const std::set<std::string>& train_songs)
{
    std::pair<SegmentDataset, SegmentDataset> split;
    split.first.classes = split.second.classes = ds.classes;
    for (const auto& r : ds.rows) (train_songs.count(r.song_id) ? split.first : split.second).rows.push_back(r);
    return split;
}

void check_fraction(double fraction, const char* who)
{
    if (!(fraction > 0.0 && fraction < 1.0))
        throw Error(ErrorCode::invalid_argument, std::string(who) + ": fraction must be in (0, 1)");
}

}  // namespace

std::pair<SegmentDataset, SegmentDataset> song_preserving_split(const SegmentDataset& ds, double fraction,
                                                                std::uint64_t seed)
{
    auto songs = ds.song_ids();
    if (songs.size() < 2)
        throw Error(ErrorCode::insufficient_data, "song_preserving_split: need at least 2 songs, have " +
                                                      std::to_string(songs.size()));
    check_fraction(fraction, "song_preserving_split");

    std::mt19937_64 rng(seed);
    shuffle_songs(songs, rng);
    const long n_train = train_count(songs.size(), fraction);
    return partition(ds, std::set<std::string>(songs.begin(), songs.begin() + n_train));
}

std::pair<SegmentDataset, SegmentDataset> stratified_song_split(const SegmentDataset& ds, double fraction,
                                                                std::uint64_t seed)
{
    check_fraction(fraction, "stratified_song_split");
    std::vector<std::vector<std::string>> by_class(ds.class_count());
    std::set<std::string> seen;
    for (const auto& r : ds.rows) {
        if (r.label < 0 || static_cast<std::size_t>(r.label) >= by_class.size())
            throw Error(ErrorCode::invalid_argument, "stratified_song_split: label out of range");
        if (seen.insert(r.song_id).second) by_class[static_cast<std::size_t>(r.label)].push_back(r.song_id);
    }

    std::mt19937_64 rng(seed);
    std::set<std::string> train_songs;
    for (auto& songs : by_class) {
        if (songs.empty()) continue;
        shuffle_songs(songs, rng);
        const long n_train = songs.size() == 1 ? 1 : train_count(songs.size(), fraction);
        train_songs.insert(songs.begin(), songs.begin() + n_train);
    }
    if (train_songs.size() == seen.size())
        throw Error(ErrorCode::insufficient_data,
                    "stratified_song_split: every class has a single song, nothing left to test on");
    return partition(ds, train_songs);
}

Normalizer Normalizer::fit(const SegmentDataset& ds)
{
    if (ds.rows.empty()) throw Error(ErrorCode::insufficient_data, "Normalizer::fit: empty dataset");
    Normalizer n;
    features::FeatureVector hi;
    n.lo_.fill(INFINITY);
    hi.fill(-INFINITY);
    for (const auto& r : ds.rows)
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) {
            n.lo_[k] = std::min(n.lo_[k], r.features[k]);
            hi[k] = std::max(hi[k], r.features[k]);
        }
    for (std::size_t k = 0; k < features::kFeatureCount; ++k)
        n.scale_[k] = hi[k] > n.lo_[k] ? 1.0 / (hi[k] - n.lo_[k]) : 0.0;
    return n;
}

features::FeatureVector Normalizer::apply(const features::FeatureVector& x) const
{
    features::FeatureVector out;
    for (std::size_t k = 0; k < features::kFeatureCount; ++k) out[k] = (x[k] - lo_[k]) * scale_[k];
    return out;
}

SegmentDataset Normalizer::apply(const SegmentDataset& ds) const
{
    SegmentDataset out = ds;
    for (auto& r : out.rows) r.features = apply(r.features);
    return out;
}

int era_label(int year)
{
    if (year <= 1997) return 0;
    if (year == 2000 || year == 2001) return 1;
    if (year >= 2003) return 2;
    throw Error(ErrorCode::invalid_argument,
                "year " + std::to_string(year) + " falls between eras (1998, 1999 and 2002 have no releases)");
}

const std::vector<std::string>& era_names()
{
    static const std::vector<std::string> names{"to1997", "2000-2001", "from2003"};
    return names;
}

double accuracy(std::span<const int> predictions, std::span<const int> labels)
{
    if (predictions.size() != labels.size())
        throw Error(ErrorCode::length_mismatch, "accuracy: predictions and labels differ in length");
    if (labels.empty()) throw Error(ErrorCode::insufficient_data, "accuracy: no predictions");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::string format_percent(double fraction) { return csv::fixed(100.0 * fraction, 3) + "%"; }

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels, std::size_t classes)
{
    if (predictions.size() != labels.size())
        throw Error(ErrorCode::length_mismatch, "confusion: predictions and labels differ in length");
    ConfusionMatrix m(classes, std::vector<long>(classes, 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto t = static_cast<std::size_t>(labels[i]);
        const auto p = static_cast<std::size_t>(predictions[i]);
        if (t >= classes || p >= classes) throw Error(ErrorCode::invalid_argument, "confusion: class out of range");
        ++m[t][p];
    }
    return m;
}

void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& matrix,
                         std::span<const std::string> classes)
{
    std::vector<csv::Row> rows;
    csv::Row header{"true\\predicted"};
    header.insert(header.end(), classes.begin(), classes.end());
    rows.push_back(header);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        csv::Row r{classes[i]};
        for (long v : matrix[i]) r.push_back(std::to_string(v));
        rows.push_back(r);
    }
    csv::write(path, rows);
}

}  // namespace mircorpus::learn
