#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/corpus/manifest.hpp"
#include "mircorpus/features/features.hpp"

namespace mircorpus::corpus {

using features::SongSummary;

using FeatureSubset = std::vector<std::size_t>;

/// "all", "rhythm", "spectral", "mfcc", "p90", "harmonicity".
FeatureSubset subset_by_name(const std::string& name);
const std::vector<std::string>& subset_names();

enum class Metric { euclidean, cityblock, cosine };
Metric metric_by_name(const std::string& name);

/// Max-min scales every feature to [0, 1] over the given songs; constant
/// features become 0.
std::vector<SongSummary> normalize_features(std::span<const SongSummary> summaries);

/// Distance restricted to `subset`. Cosine distance is 1 - cos, with 0 for
/// two zero vectors and 1 when only one is zero.
double distance(const features::FeatureVector& a, const features::FeatureVector& b, const FeatureSubset& subset,
                Metric metric = Metric::euclidean);

struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> d;

    std::size_t size() const noexcept { return labels.size(); }
};

SimilarityMatrix similarity_matrix(std::span<const SongSummary> entities, const FeatureSubset& subset,
                                   Metric metric = Metric::euclidean);

/// Per-album mean of (already normalised) song summaries, labelled by album
/// code, in order of first appearance in `tracks`. Songs are matched by id.
std::vector<SongSummary> album_means(std::span<const SongSummary> normalized, std::span<const TrackMeta> tracks);

struct RankEntry {
    std::string label;
    double score = 0.0;
};

/// Row sums of the matrix, ascending (most representative first); ties keep input order.
std::vector<RankEntry> representativeness(const SimilarityMatrix& matrix);

/// Header row of labels, then one labelled row per entity, 4 decimals.
void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& matrix);
SimilarityMatrix read_similarity_csv(const std::filesystem::path& path);
/// rank,label,score with 6 decimals.
void write_representativeness_csv(const std::filesystem::path& path, std::span<const RankEntry> ranking);

}  // namespace mircorpus::corpus
