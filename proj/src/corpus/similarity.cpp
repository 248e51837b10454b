#include "mircorpus/corpus/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::corpus {

namespace {

FeatureSubset range(std::size_t first, std::size_t last)
{
    FeatureSubset s(last - first + 1);
    std::iota(s.begin(), s.end(), first);
    return s;
}

}  // namespace

const std::vector<std::string>& subset_names()
{
    static const std::vector<std::string> names{"all", "rhythm", "spectral", "mfcc", "p90", "harmonicity"};
    return names;
}

FeatureSubset subset_by_name(const std::string& name)
{
    namespace f = features::feature;
    if (name == "all") return range(0, features::kFeatureCount - 1);
    if (name == "rhythm") return range(f::perc_onset_density, f::beat_metricity);
    if (name == "spectral") return range(f::centroid, f::entropy);
    if (name == "mfcc") return range(f::mfcc_first, f::mfcc_last);
    if (name == "p90") return {f::percentile_90};
    if (name == "harmonicity") return {f::harmonicity};
    throw Error(ErrorCode::invalid_argument, "unknown feature subset '" + name + "'");
}

Metric metric_by_name(const std::string& name)
{
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cityblock") return Metric::cityblock;
    if (name == "cosine") return Metric::cosine;
    throw Error(ErrorCode::invalid_argument, "unknown metric '" + name + "'");
}

std::vector<SongSummary> normalize_features(std::span<const SongSummary> summaries)
{
    if (summaries.empty()) throw Error(ErrorCode::insufficient_data, "normalize_features: no summaries");
    features::FeatureVector lo, hi;
    lo.fill(INFINITY);
    hi.fill(-INFINITY);
    for (const auto& s : summaries)
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) {
            lo[k] = std::min(lo[k], s.means[k]);
            hi[k] = std::max(hi[k], s.means[k]);
        }
    std::vector<SongSummary> out(summaries.begin(), summaries.end());
    for (auto& s : out)
        for (std::size_t k = 0; k < features::kFeatureCount; ++k)
            s.means[k] = hi[k] > lo[k] ? (s.means[k] - lo[k]) / (hi[k] - lo[k]) : 0.0;
    return out;
}

double distance(const features::FeatureVector& a, const features::FeatureVector& b, const FeatureSubset& subset,
                Metric metric)
{
    for (std::size_t k : subset)
        if (k >= features::kFeatureCount)
            throw Error(ErrorCode::invalid_argument, "feature index " + std::to_string(k) + " out of range");
    switch (metric) {
    case Metric::euclidean: {
        double s = 0.0;
        for (std::size_t k : subset) s += (a[k] - b[k]) * (a[k] - b[k]);
        return std::sqrt(s);
    }
    case Metric::cityblock: {
        double s = 0.0;
        for (std::size_t k : subset) s += std::abs(a[k] - b[k]);
        return s;
    }
    case Metric::cosine: {
        double ab = 0.0, aa = 0.0, bb = 0.0;
        for (std::size_t k : subset) {
            ab += a[k] * b[k];
            aa += a[k] * a[k];
            bb += b[k] * b[k];
        }
        if (aa == 0.0 && bb == 0.0) return 0.0;
        if (aa == 0.0 || bb == 0.0) return 1.0;
        return std::max(0.0, 1.0 - ab / std::sqrt(aa * bb));
    }
    }
    return 0.0;
}

SimilarityMatrix similarity_matrix(std::span<const SongSummary> entities, const FeatureSubset& subset, Metric metric)
{
    SimilarityMatrix m;
    const std::size_t n = entities.size();
    m.d.assign(n, std::vector<double>(n, 0.0));
    for (const auto& e : entities) m.labels.push_back(e.song_id);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.d[i][j] = m.d[j][i] = distance(entities[i].means, entities[j].means, subset, metric);
    return m;
}

std::vector<SongSummary> album_means(std::span<const SongSummary> normalized, std::span<const TrackMeta> tracks)
{
    std::map<std::string, const TrackMeta*> by_id;
    for (const auto& t : tracks) by_id[t.song_id] = &t;

    std::vector<SongSummary> albums;
    std::vector<long> counts;
    for (const auto& code : album_order(tracks)) {
        albums.push_back({code, {}});
        counts.push_back(0);
    }
    auto slot = [&](const std::string& code) {
        return static_cast<std::size_t>(
            std::find_if(albums.begin(), albums.end(), [&](const SongSummary& a) { return a.song_id == code; }) -
            albums.begin());
    };
    for (const auto& s : normalized) {
        const auto it = by_id.find(s.song_id);
        if (it == by_id.end())
            throw Error(ErrorCode::invalid_argument, "album_means: song '" + s.song_id + "' not in manifest");
        const std::size_t a = slot(it->second->album);
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) albums[a].means[k] += s.means[k];
        ++counts[a];
    }
    std::vector<SongSummary> out;
    for (std::size_t a = 0; a < albums.size(); ++a) {
        if (counts[a] == 0) continue;
        for (double& v : albums[a].means) v /= static_cast<double>(counts[a]);
        out.push_back(albums[a]);
    }
    return out;
}

std::vector<RankEntry> representativeness(const SimilarityMatrix& matrix)
{
    std::vector<RankEntry> ranking;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        ranking.push_back({matrix.labels[i], std::accumulate(matrix.d[i].begin(), matrix.d[i].end(), 0.0)});
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.score < b.score; });
    return ranking;
}

void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& matrix)
{
    std::vector<csv::Row> rows;
    csv::Row header{""};
    header.insert(header.end(), matrix.labels.begin(), matrix.labels.end());
    rows.push_back(header);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        csv::Row r{matrix.labels[i]};
        for (double v : matrix.d[i]) r.push_back(csv::fixed(v, 4));
        rows.push_back(r);
    }
    csv::write(path, rows);
}

SimilarityMatrix read_similarity_csv(const std::filesystem::path& path)
{
    const auto rows = csv::read(path);
    if (rows.empty()) throw Error(ErrorCode::malformed_header, path.string() + ": empty similarity file");
    SimilarityMatrix m;
    m.labels.assign(rows[0].begin() + 1, rows[0].end());
    const std::size_t n = m.labels.size();
    if (rows.size() != n + 1)
        throw Error(ErrorCode::parse, path.string() + ": expected " + std::to_string(n) + " rows");
    for (std::size_t i = 1; i <= n; ++i) {
        if (rows[i].size() != n + 1 || rows[i][0] != m.labels[i - 1])
            throw Error(ErrorCode::parse, path.string() + ": bad row " + std::to_string(i + 1));
        std::vector<double> d;
        for (std::size_t j = 1; j <= n; ++j) d.push_back(csv::to_double(rows[i][j], path.string()));
        m.d.push_back(std::move(d));
    }
    return m;
}

void write_representativeness_csv(const std::filesystem::path& path, std::span<const RankEntry> ranking)
{
    std::vector<csv::Row> rows{{"rank", "label", "score"}};
    for (std::size_t i = 0; i < ranking.size(); ++i)
        rows.push_back({std::to_string(i + 1), ranking[i].label, csv::fixed(ranking[i].score, 6)});
    csv::write(path, rows);
}

}  // namespace mircorpus::corpus
