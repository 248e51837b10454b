#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "mircorpus/cli/commands.hpp"
#include "mircorpus/corpus/similarity.hpp"
#include "mircorpus/features/features.hpp"

namespace mircorpus::cli {

namespace {

struct Subcommand {
    const char* name;
    const char* help;
};

constexpr Subcommand kCommands[] = {
    {"synth", "Render a synthetic corpus from a spec file"},
    {"extract", "Compute feature trails and song summaries"},
    {"chords", "Detect chords and keys; write transition statistics"},
    {"similarity", "Distance matrix and heat map over a feature subset"},
    {"trend", "Per-feature regression on release year"},
    {"classify", "Train and evaluate an album, year or era classifier"},
    {"rank", "Rank entities of a distance matrix by representativeness"},
    {"compare", "Per-feature Spearman correlation of two summary files"},
    {"report", "Run extract, chords, similarity, trend and rank"},
};

void add_common(CLI::App& sub, RunConfig& cfg)
{
    sub.add_option("--out,-o", cfg.out, "Output directory (default: $MIRCORPUS_OUT or .)");
    sub.add_option("--seed", cfg.seed, "Random seed");
    sub.add_option("--workers,-j", cfg.workers, "Worker threads (default: all processors)")
        ->check(CLI::NonNegativeNumber);
    sub.add_flag("--quiet,-q", cfg.quiet, "Suppress per-song progress");
}

void add_manifest(CLI::App& sub, RunConfig& cfg, bool required)
{
    auto* opt = sub.add_option("--manifest,-m", cfg.manifest, "Manifest CSV");
    if (required) opt->required();
}

void add_summaries(CLI::App& sub, RunConfig& cfg)
{
    sub.add_option("--summaries", cfg.summaries, "Summary CSV (default: <out>/summaries.csv)");
}

void add_segments(CLI::App& sub, RunConfig& cfg)
{
    sub.add_option("--window", cfg.window, "Segment window in seconds")->check(CLI::PositiveNumber);
    sub.add_option("--hop", cfg.hop, "Segment hop in seconds")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& diag)
{
    RunConfig cfg;
    if (const char* env = std::getenv(kOutEnv); env && *env) cfg.out = env;

    CLI::App app{"Corpus-scale music feature analysis"};
    app.require_subcommand(1);
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : kCommands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(*sub, cfg);
        subs[c.name] = sub;
    }

    subs["synth"]->add_option("spec", cfg.spec, "Corpus spec file")->required()->check(CLI::ExistingFile);

    add_manifest(*subs["extract"], cfg, true);
    add_summaries(*subs["extract"], cfg);

    add_manifest(*subs["chords"], cfg, true);

    auto& sim = *subs["similarity"];
    add_summaries(sim, cfg);
    add_manifest(sim, cfg, false);
    sim.add_option("--subset", cfg.subset, "Feature subset")->check(CLI::IsMember(corpus::subset_names()));
    sim.add_option("--level", cfg.level, "song or album")->check(CLI::IsMember({"song", "album"}));
    sim.add_option("--metric", cfg.metric, "Distance metric")
        ->check(CLI::IsMember({"euclidean", "cityblock", "cosine"}));

    auto& trend = *subs["trend"];
    add_manifest(trend, cfg, true);
    add_summaries(trend, cfg);
    add_segments(trend, cfg);
    trend.add_option("--features", cfg.features, "Comma-separated feature indices (default: all)")
        ->delimiter(',')
        ->check(CLI::Range(std::size_t{0}, features::kFeatureCount - 1));
    trend.add_option("--stack-offset", cfg.stack_offset, "Also plot stacked trails with this vertical offset")
        ->check(CLI::NonNegativeNumber);
    trend.add_option("--trail-feature", cfg.trail_feature, "Feature drawn in the stacked trail plot")
        ->check(CLI::Range(std::size_t{0}, features::kFeatureCount - 1));

    auto& cls = *subs["classify"];
    add_manifest(cls, cfg, true);
    add_segments(cls, cfg);
    cls.add_option("--task", cfg.task, "album, year or era")->check(CLI::IsMember({"album", "year", "era"}));
    cls.add_option("--model", cfg.model, "mlp or nb")->check(CLI::IsMember({"mlp", "nb"}));
    cls.add_option("--epochs", cfg.epochs, "MLP training epochs")->check(CLI::PositiveNumber);
    cls.add_option("--greedy", cfg.greedy, "Greedy NB feature selection up to this many features");

    auto& rank = *subs["rank"];
    rank.add_option("--matrix", cfg.matrix, "Similarity matrix CSV")->required()->check(CLI::ExistingFile);

    auto& cmp = *subs["compare"];
    cmp.add_option("--summaries", cfg.summaries, "First summary CSV")->required()->check(CLI::ExistingFile);
    cmp.add_option("--summaries-b", cfg.summaries_b, "Second summary CSV")->required()->check(CLI::ExistingFile);

    add_manifest(*subs["report"], cfg, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        diag << "error: " << e.what() << '\n';
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) {
                diag << "run '" << argv[0] << ' ' << name << " --help' for usage\n";
                return kUsage;
            }
        diag << "run '" << argv[0] << " --help' for usage\n";
        return kUsage;
    }

    for (const auto& [name, sub] : subs)
        if (sub->parsed()) cfg.command = name;
    return run_command(cfg, diag);
}

}  // namespace mircorpus::cli
