#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mircorpus/learn/dataset.hpp"

namespace mircorpus::learn {

// ---------------------------------------------------------------------------
// Single-hidden-layer network: logistic hidden units, softmax output.

struct MlpModel {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;
    std::vector<double> w1;  // hidden x inputs, row major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // outputs x hidden, row major
    std::vector<double> b2;  // outputs
    std::uint64_t seed = 0;
    int epochs = 0;
    std::vector<std::string> classes;

    static MlpModel zeros(std::size_t inputs, std::size_t hidden, std::size_t outputs);
    /// Uniform weights in [-0.05, 0.05].
    static MlpModel random(std::size_t inputs, std::size_t hidden, std::size_t outputs, std::uint64_t seed);
};

struct MlpTraining {
    int epochs = 1000;
    double learning_rate = 0.1;
    std::size_t hidden = features::kFeatureCount;
    std::uint64_t seed = 1;
};

/// Class probabilities for one input.
std::vector<double> mlp_forward(const MlpModel& model, std::span<const double> x);
std::vector<double> softmax(std::span<const double> logits);

using Matrix = std::vector<std::vector<double>>;

/// Mean cross-entropy over rows.
double mlp_loss(const MlpModel& model, const Matrix& x, std::span<const int> y);
/// Analytic gradient of mlp_loss, packed like the model's parameters.
MlpModel mlp_gradient(const MlpModel& model, const Matrix& x, std::span<const int> y);

/// Full-batch gradient descent. Returns the model and fills `loss_history`
/// (epochs + 1 entries, before and after every epoch) when given.
MlpModel train_mlp(const SegmentDataset& train, const MlpTraining& options = {},
                   std::vector<double>* loss_history = nullptr);
int predict_mlp(const MlpModel& model, std::span<const double> x);
int predict_mlp(const MlpModel& model, const features::FeatureVector& x);

// ---------------------------------------------------------------------------
// Gaussian naive Bayes.

inline constexpr double kVarianceFloor = 1e-9;

struct NbModel {
    std::vector<std::size_t> subset;  // feature indices used
    std::vector<double> priors;       // per class
    Matrix means;                     // class x subset
    Matrix variances;                 // class x subset
    std::vector<std::string> classes;
};

/// Throws insufficient_data when a class has fewer than 2 rows.
NbModel train_nb(const SegmentDataset& train, std::vector<std::size_t> subset = {});
/// Per-class log prior + log likelihood.
std::vector<double> nb_log_posterior(const NbModel& model, const features::FeatureVector& x);
int predict_nb(const NbModel& model, const features::FeatureVector& x);

// ---------------------------------------------------------------------------

struct GreedyResult {
    std::vector<std::size_t> order;        // feature added at each stage
    std::vector<double> stage_accuracy;    // test accuracy after each stage
    std::vector<std::size_t> best_subset;  // prefix of `order` with the best accuracy
    double best_accuracy = 0.0;
};

/// Forward selection with naive Bayes on a fixed train/test pair; ties go to
/// the lowest feature index, the best stage is the earliest reaching the maximum.
GreedyResult greedy_select(const SegmentDataset& train, const SegmentDataset& test, std::size_t max_features);
/// Same, on song_preserving_split(ds, 0.5, seed).
GreedyResult greedy_select(const SegmentDataset& ds, std::size_t max_features, std::uint64_t seed);

/// Predictions of a classifier over every row.
std::vector<int> predict_all(const MlpModel& model, const SegmentDataset& ds);
std::vector<int> predict_all(const NbModel& model, const SegmentDataset& ds);
std::vector<int> labels_of(const SegmentDataset& ds);

// Text dumps with a header of format version, seed, epochs and class labels.
void save_model(const std::filesystem::path& path, const MlpModel& model);
void save_model(const std::filesystem::path& path, const NbModel& model);
MlpModel load_mlp(const std::filesystem::path& path);
NbModel load_nb(const std::filesystem::path& path);

}  // namespace mircorpus::learn
