#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mircorpus::cli {

enum ExitCode : int { kOk = 0, kDataFailure = 1, kUsage = 2 };

/// Raised for bad flag values and missing mandatory inputs (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::filesystem::path manifest;
    std::filesystem::path out = ".";
    std::string subset = "all";
    std::uint64_t seed = 1;
    double window = 2.0;  // segment window, seconds
    double hop = 1.0;     // segment hop, seconds

    std::filesystem::path spec;         // synth
    std::filesystem::path summaries;    // defaults to <out>/summaries.csv
    std::filesystem::path summaries_b;  // compare
    std::filesystem::path matrix;       // rank
    std::string level = "song";
    std::string metric = "euclidean";
    std::string task = "era";
    std::string model = "nb";
    std::vector<std::size_t> features;  // trend; empty means all
    std::optional<double> stack_offset;
    std::size_t trail_feature = 0;
    std::size_t greedy = 0;  // classify: max features for greedy NB selection, 0 = off
    int epochs = 1000;
    int workers = 0;  // 0 = hardware concurrency
    bool quiet = false;

    std::filesystem::path summaries_path() const;
    int worker_count() const;
};

/// The environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "MIRCORPUS_OUT";

int cmd_synth(const RunConfig& cfg, std::ostream& diag);
int cmd_extract(const RunConfig& cfg, std::ostream& diag);
int cmd_chords(const RunConfig& cfg, std::ostream& diag);
int cmd_similarity(const RunConfig& cfg, std::ostream& diag);
int cmd_trend(const RunConfig& cfg, std::ostream& diag);
int cmd_classify(const RunConfig& cfg, std::ostream& diag);
int cmd_rank(const RunConfig& cfg, std::ostream& diag);
int cmd_compare(const RunConfig& cfg, std::ostream& diag);
int cmd_report(const RunConfig& cfg, std::ostream& diag);

/// Dispatches on cfg.command; library and data errors are reported on `diag`
/// and mapped to exit code 1, usage errors to 2.
int run_command(const RunConfig& cfg, std::ostream& diag);

/// Full command line front end (flag parsing included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace mircorpus::cli
