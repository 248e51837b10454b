#include "mircorpus/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "mircorpus/cli/pool.hpp"
#include "mircorpus/cli/svg.hpp"
#include "mircorpus/cli/synth_spec.hpp"
#include "mircorpus/corpus/manifest.hpp"
#include "mircorpus/corpus/similarity.hpp"
#include "mircorpus/corpus/stats.hpp"
#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"
#include "mircorpus/features/features.hpp"
#include "mircorpus/harmony/chords.hpp"
#include "mircorpus/harmony/key.hpp"
#include "mircorpus/harmony/transitions.hpp"
#include "mircorpus/learn/dataset.hpp"
#include "mircorpus/learn/models.hpp"
#include "mircorpus/signal/audio.hpp"

namespace fs = std::filesystem;

namespace mircorpus::cli {

int default_workers()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

fs::path RunConfig::summaries_path() const
{
    return summaries.empty() ? out / "summaries.csv" : summaries;
}

int RunConfig::worker_count() const { return workers > 0 ? workers : default_workers(); }

namespace {

class Progress {
public:
    Progress(const RunConfig& cfg, std::ostream& diag) : quiet_(cfg.quiet), diag_(diag) {}

    void line(const std::string& text)
    {
        if (!quiet_) diag_ << text << '\n';
    }
    // Failures are reported even in quiet mode.
    void failure(const std::string& text) { diag_ << text << '\n'; }

private:
    bool quiet_;
    std::ostream& diag_;
};

std::vector<corpus::TrackMeta> require_manifest(const RunConfig& cfg)
{
    if (cfg.manifest.empty()) throw UsageError(cfg.command + ": --manifest is required");
    auto tracks = corpus::load_manifest(cfg.manifest);
    if (tracks.empty()) throw Error(ErrorCode::insufficient_data, cfg.manifest.string() + ": no tracks");
    return tracks;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, dir.string() + ": cannot create directory (" + ec.message() + ")");
}

fs::path trail_path(const RunConfig& cfg, const std::string& id) { return cfg.out / "trails" / (id + ".csv"); }

int year_of(const std::map<std::string, int>& years, const std::string& id)
{
    const auto it = years.find(id);
    if (it == years.end()) throw Error(ErrorCode::invalid_argument, "song '" + id + "' is not in the manifest");
    return it->second;
}

std::map<std::string, int> year_map(std::span<const corpus::TrackMeta> tracks)
{
    std::map<std::string, int> years;
    for (const auto& t : tracks) years[t.song_id] = t.year;
    return years;
}

// ---------------------------------------------------------------- extract

struct ExtractResult {
    bool ok = false;
    std::string message;
    features::SongSummary summary;
};

// ---------------------------------------------------------------- chords

struct ChordResult {
    bool ok = false;
    std::string message;
    std::vector<harmony::ChordEvent> chords;  // no-chord events removed
    std::size_t event_count = 0;
    harmony::TransitionHistogram transitions;
};

std::string ratio_text(const harmony::TransitionHistogram& hist)
{
    try {
        return csv::sig(harmony::plagal_perfect_ratio(hist), 6);
    } catch (const Error&) {
        return "undefined";
    }
}

// ---------------------------------------------------------------- classify

struct Labelling {
    std::vector<int> label;  // per track
    std::vector<std::string> classes;
};

Labelling label_tracks(std::span<const corpus::TrackMeta> tracks, const std::string& task)
{
    std::vector<std::string> raw;
    for (const auto& t : tracks) {
        if (task == "album") raw.push_back(t.album);
        else if (task == "year") raw.push_back(std::to_string(t.year));
        else if (task == "era") raw.push_back(learn::era_names().at(static_cast<std::size_t>(learn::era_label(t.year))));
        else throw UsageError("unknown task '" + task + "'");
    }
    // class order: album by first appearance, years and eras chronologically
    std::vector<std::string> classes;
    if (task == "album") {
        classes = corpus::album_order(tracks);
    } else if (task == "year") {
        std::set<int> ys;
        for (const auto& t : tracks) ys.insert(t.year);
        for (int y : ys) classes.push_back(std::to_string(y));
    } else {
        for (const auto& name : learn::era_names())
            if (std::find(raw.begin(), raw.end(), name) != raw.end()) classes.push_back(name);
    }
    Labelling out;
    out.classes = classes;
    for (const auto& r : raw)
        out.label.push_back(static_cast<int>(std::find(classes.begin(), classes.end(), r) - classes.begin()));
    return out;
}

}  // namespace

// ======================================================================

int cmd_synth(const RunConfig& cfg, std::ostream& diag)
{
    if (cfg.spec.empty()) throw UsageError("synth: a spec file is required");
    Progress progress(cfg, diag);
    const auto songs = load_synth_spec(cfg.spec);
    if (songs.empty()) throw Error(ErrorCode::insufficient_data, cfg.spec.string() + ": no songs");
    ensure_dir(cfg.out / "audio");

    const auto written = parallel_map<double>(songs.size(), cfg.worker_count(), [&](std::size_t i) {
        const auto audio = render_song(songs[i], song_seed(cfg.seed, i));
        signal::write_wav(cfg.out / "audio" / (songs[i].id + ".wav"), audio);
        return audio.duration();
    });

    std::vector<corpus::TrackMeta> tracks;
    for (std::size_t i = 0; i < songs.size(); ++i) {
        tracks.push_back({songs[i].id, fs::path("audio") / (songs[i].id + ".wav"), songs[i].id, songs[i].album,
                          songs[i].year});
        progress.line("synth: " + songs[i].id + " " + csv::fixed(written[i], 3) + " s");
    }
    corpus::write_manifest(cfg.out / "manifest.csv", tracks);
    return kOk;
}

int cmd_extract(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    const auto tracks = require_manifest(cfg);
    ensure_dir(cfg.out / "trails");

    const auto results = parallel_map<ExtractResult>(tracks.size(), cfg.worker_count(), [&](std::size_t i) {
        ExtractResult r;
        try {
            const auto audio = signal::load_audio(tracks[i].path);
            const auto trail = features::extract_features(audio, tracks[i].song_id);
            features::write_trail_csv(trail_path(cfg, tracks[i].song_id), trail);
            r.summary = features::song_summary(trail);
            r.ok = true;
            r.message = std::to_string(trail.frames.size()) + " frames";
        } catch (const std::exception& e) {
            r.message = e.what();
        }
        return r;
    });

    std::vector<features::SongSummary> rows;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (results[i].ok) {
            rows.push_back(results[i].summary);
            progress.line("extract: " + tracks[i].song_id + " ok (" + results[i].message + ")");
        } else {
            ++failed;
            progress.failure("extract: " + tracks[i].song_id + " FAILED: " + results[i].message);
        }
    }
    features::write_summaries_csv(cfg.summaries_path(), rows);
    if (failed) {
        progress.failure("extract: " + std::to_string(failed) + " of " + std::to_string(tracks.size()) +
                         " songs failed");
        return kDataFailure;
    }
    return kOk;
}

int cmd_chords(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    const auto tracks = require_manifest(cfg);
    const auto dir = cfg.out / "chords";
    ensure_dir(dir);

    const auto results = parallel_map<ChordResult>(tracks.size(), cfg.worker_count(), [&](std::size_t i) {
        ChordResult r;
        try {
            const auto audio = signal::load_audio(tracks[i].path);
            const auto events = harmony::detect_chords(audio);
            harmony::write_lab(dir / (tracks[i].song_id + ".lab"), events);
            r.event_count = events.size();
            r.chords = harmony::without_no_chord(events);
            std::vector<harmony::KeyEstimate> keys;
            if (!r.chords.empty()) {
                keys = harmony::local_key(std::span<const harmony::ChordEvent>(r.chords));
                r.transitions = harmony::transition_histogram(std::span<const harmony::ChordEvent>(r.chords), keys);
            }
            harmony::write_key_lab(dir / (tracks[i].song_id + ".key.lab"), r.chords, keys);
            r.ok = true;
        } catch (const std::exception& e) {
            r.message = e.what();
        }
        return r;
    });

    harmony::TransitionHistogram total;
    std::vector<harmony::ChordEvent> all_chords;
    std::vector<harmony::YearChords> by_year;
    std::map<int, std::vector<double>> rhythm;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const auto& r = results[i];
        if (!r.ok) {
            ++failed;
            progress.failure("chords: " + tracks[i].song_id + " FAILED: " + r.message);
            continue;
        }
        total.merge(r.transitions);
        all_chords.insert(all_chords.end(), r.chords.begin(), r.chords.end());
        by_year.push_back({tracks[i].year, r.chords});
        if (r.chords.size() >= 2) rhythm[tracks[i].year].push_back(harmony::harmonic_rhythm(r.chords));
        progress.line("chords: " + tracks[i].song_id + " " + std::to_string(r.event_count) + " events, " +
                      std::to_string(r.chords.size()) + " chords, " + std::to_string(r.transitions.total()) +
                      " transitions");
    }

    std::vector<harmony::TransitionRow> ranked;
    if (total.total() > 0) ranked = harmony::rank_transitions(total, 0);
    harmony::write_transition_report(cfg.out / "transitions.csv", ranked);

    std::vector<csv::Row> types{{"type", "name", "count"}};
    const auto type_counts = harmony::chord_type_histogram(all_chords);
    for (std::size_t t = 0; t < harmony::kChordTypeCount; ++t)
        types.push_back({harmony::lab_suffix(static_cast<harmony::ChordType>(t)),
                         harmony::long_name(static_cast<harmony::ChordType>(t)), std::to_string(type_counts[t])});
    csv::write(cfg.out / "chord_types.csv", types);

    std::vector<csv::Row> roots{{"root", "name", "count"}};
    const auto root_counts = harmony::chord_root_histogram(all_chords);
    for (int p = 0; p < 12; ++p)
        roots.push_back({std::to_string(p), harmony::pitch_name_sharp(p),
                         std::to_string(root_counts[static_cast<std::size_t>(p)])});
    csv::write(cfg.out / "chord_roots.csv", roots);

    csv::Row usage_header{"year"};
    for (std::size_t t = 0; t < harmony::kChordTypeCount; ++t)
        usage_header.push_back(harmony::lab_suffix(static_cast<harmony::ChordType>(t)));
    std::vector<csv::Row> usage{usage_header};
    for (const auto& [year, shares] : harmony::type_usage_by_year(by_year)) {
        csv::Row row{std::to_string(year)};
        for (double s : shares) row.push_back(csv::fixed(s, 6));
        usage.push_back(row);
    }
    csv::write(cfg.out / "type_usage_by_year.csv", usage);

    std::vector<csv::Row> hr{{"year", "songs", "mean_seconds"}};
    for (const auto& [year, gaps] : rhythm)
        hr.push_back({std::to_string(year), std::to_string(gaps.size()),
                      csv::fixed(std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size()), 6)});
    csv::write(cfg.out / "harmonic_rhythm_by_year.csv", hr);

    const harmony::RelativeChord I{0, harmony::ChordType::major};
    const harmony::RelativeChord IV{5, harmony::ChordType::major};
    const harmony::RelativeChord V{7, harmony::ChordType::major};
    std::ostringstream summary;
    summary << "songs " << tracks.size() - failed << '\n'
            << "chords " << all_chords.size() << '\n'
            << "transitions " << total.total() << '\n'
            << "plagal " << total.count(IV, I) << '\n'
            << "perfect " << total.count(V, I) << '\n'
            << "plagal_perfect_ratio " << ratio_text(total) << '\n';
    write_text(cfg.out / "chords_summary.txt", summary.str());

    if (failed) {
        progress.failure("chords: " + std::to_string(failed) + " of " + std::to_string(tracks.size()) +
                         " songs failed");
        return kDataFailure;
    }
    return kOk;
}

namespace {

corpus::SimilarityMatrix compute_similarity(const RunConfig& cfg)
{
    const auto& names = corpus::subset_names();
    if (std::find(names.begin(), names.end(), cfg.subset) == names.end())
        throw UsageError("unknown subset '" + cfg.subset + "'");
    if (cfg.metric != "euclidean" && cfg.metric != "cityblock" && cfg.metric != "cosine")
        throw UsageError("unknown metric '" + cfg.metric + "'");
    if (cfg.level != "song" && cfg.level != "album") throw UsageError("unknown level '" + cfg.level + "'");
    if (cfg.level == "album" && cfg.manifest.empty()) throw UsageError("similarity: --level album needs --manifest");

    const auto summaries = features::read_summaries_csv(cfg.summaries_path());
    if (summaries.empty()) throw Error(ErrorCode::insufficient_data, cfg.summaries_path().string() + ": no songs");
    auto entities = corpus::normalize_features(summaries);
    if (cfg.level == "album") entities = corpus::album_means(entities, corpus::load_manifest(cfg.manifest));
    return corpus::similarity_matrix(entities, corpus::subset_by_name(cfg.subset), corpus::metric_by_name(cfg.metric));
}

std::string similarity_stem(const RunConfig& cfg) { return "similarity_" + cfg.level + "_" + cfg.subset; }

}  // namespace

int cmd_similarity(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    const auto matrix = compute_similarity(cfg);
    const auto stem = similarity_stem(cfg);
    ensure_dir(cfg.out);
    corpus::write_similarity_csv(cfg.out / (stem + ".csv"), matrix);
    write_text(cfg.out / (stem + ".svg"),
               heatmap_svg(matrix, cfg.level + " distances, " + cfg.subset + " features (" + cfg.metric + ")"));
    progress.line("similarity: " + stem + " " + std::to_string(matrix.size()) + "x" +
                  std::to_string(matrix.size()));
    return kOk;
}

int cmd_trend(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    const auto tracks = require_manifest(cfg);
    const auto summaries = features::read_summaries_csv(cfg.summaries_path());
    const auto years = year_map(tracks);

    std::vector<double> x;
    for (const auto& s : summaries) x.push_back(year_of(years, s.song_id));
    if (std::set<double>(x.begin(), x.end()).size() < 3)
        throw Error(ErrorCode::insufficient_data, "trend: need songs from at least 3 distinct years");

    std::vector<std::size_t> selected = cfg.features;
    if (selected.empty()) {
        selected.resize(features::kFeatureCount);
        std::iota(selected.begin(), selected.end(), std::size_t{0});
    }
    std::vector<corpus::NamedTrend> trends;
    const auto plots = cfg.out / "trend_plots";
    ensure_dir(plots);
    for (std::size_t f : selected) {
        if (f >= features::kFeatureCount) throw UsageError("feature index " + std::to_string(f) + " out of range");
        std::vector<double> y;
        for (const auto& s : summaries) y.push_back(s.means[f]);
        const auto fit = corpus::trend_fit(x, y);
        trends.push_back({f, fit});
        const std::string name = features::feature_name(f);
        write_text(plots / ("f" + std::to_string(f) + ".svg"),
                   scatter_svg(x, y, fit, std::to_string(f) + " " + name + " by year", "year", name));
    }
    std::stable_sort(trends.begin(), trends.end(),
                     [](const auto& a, const auto& b) { return a.fit.p < b.fit.p; });
    corpus::write_trend_report(cfg.out / "trends.csv", trends);

    if (cfg.stack_offset) {
        if (cfg.trail_feature >= features::kFeatureCount) throw UsageError("--trail-feature out of range");
        std::vector<Trail> trails;
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& t : tracks) {
            const auto trail = features::read_trail_csv(trail_path(cfg, t.song_id), t.song_id);
            Trail tr{t.song_id + " (" + std::to_string(t.year) + ")", {}};
            for (const auto& w : features::windowed_means(trail, cfg.window, cfg.hop)) {
                const double v = w.values[cfg.trail_feature];
                tr.values.push_back(v);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            trails.push_back(std::move(tr));
        }
        for (auto& tr : trails)
            for (auto& v : tr.values) v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        write_text(cfg.out / "trails_stacked.svg",
                   stacked_trails_svg(trails, *cfg.stack_offset, cfg.hop,
                                      std::string(features::feature_name(cfg.trail_feature)) + " trails"));
    }
    progress.line("trend: " + std::to_string(trends.size()) + " features over " + std::to_string(x.size()) +
                  " songs; lowest p: " + features::feature_name(trends.front().feature));
    return kOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    if (cfg.model != "mlp" && cfg.model != "nb") throw UsageError("unknown model '" + cfg.model + "'");
    if (!(cfg.window > 0.0) || !(cfg.hop > 0.0)) throw UsageError("--window and --hop must be positive");
    const auto tracks = require_manifest(cfg);
    const auto labels = label_tracks(tracks, cfg.task);

    learn::SegmentDataset ds;
    ds.classes = labels.classes;
    std::vector<std::size_t> songs_per_class(labels.classes.size(), 0);
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        const auto trail = features::read_trail_csv(trail_path(cfg, tracks[i].song_id), tracks[i].song_id);
        const auto windows = features::windowed_means(trail, cfg.window, cfg.hop);
        if (windows.empty())
            throw Error(ErrorCode::too_short, tracks[i].song_id + ": shorter than one segment window");
        for (const auto& w : windows) ds.rows.push_back({w.values, labels.label[i], tracks[i].song_id});
        ++songs_per_class[static_cast<std::size_t>(labels.label[i])];
    }
    if (cfg.model == "nb") {
        for (std::size_t c = 0; c < songs_per_class.size(); ++c)
            if (songs_per_class[c] < 2)
                throw Error(ErrorCode::insufficient_data,
                            "classify: class '" + labels.classes[c] + "' has only " +
                                std::to_string(songs_per_class[c]) +
                                " song; naive Bayes needs at least 2 songs per class (try --task era)");
    }

    const auto [raw_train, raw_test] = learn::stratified_song_split(ds, 0.5, cfg.seed);
    const auto norm = learn::Normalizer::fit(raw_train);
    const auto train = norm.apply(raw_train);
    const auto test = norm.apply(raw_test);

    const auto stem = cfg.task + "_" + cfg.model;
    ensure_dir(cfg.out);
    std::vector<int> predicted;
    std::ostringstream extra;
    if (cfg.model == "mlp") {
        learn::MlpTraining opts;
        opts.epochs = cfg.epochs;
        opts.seed = cfg.seed;
        const auto model = learn::train_mlp(train, opts);
        predicted = learn::predict_all(model, test);
        learn::save_model(cfg.out / ("model_" + stem + ".txt"), model);
    } else {
        learn::NbModel model;
        try {
            model = learn::train_nb(train);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) +
                                      (cfg.task == "era" ? " (try another --seed)" : " (try --task era)"));
        }
        predicted = learn::predict_all(model, test);
        learn::save_model(cfg.out / ("model_" + stem + ".txt"), model);
        if (cfg.greedy > 0) {
            const auto g = learn::greedy_select(train, test, cfg.greedy);
            std::vector<csv::Row> rows{{"stage", "feature", "name", "accuracy"}};
            for (std::size_t s = 0; s < g.order.size(); ++s)
                rows.push_back({std::to_string(s + 1), std::to_string(g.order[s]), features::feature_name(g.order[s]),
                                learn::format_percent(g.stage_accuracy[s])});
            csv::write(cfg.out / ("greedy_" + cfg.task + ".csv"), rows);
            extra << "greedy_best_features " << g.best_subset.size() << '\n'
                  << "greedy_best_accuracy " << learn::format_percent(g.best_accuracy) << '\n';
        }
    }
    const auto truth = learn::labels_of(test);
    const double acc = learn::accuracy(predicted, truth);
    const auto matrix = learn::confusion(predicted, truth, ds.class_count());
    learn::write_confusion_csv(cfg.out / ("confusion_" + stem + ".csv"), matrix, ds.classes);
    const long correct = static_cast<long>(std::llround(acc * static_cast<double>(truth.size())));

    std::ostringstream report;
    report << "task " << cfg.task << '\n'
           << "model " << cfg.model << '\n'
           << "seed " << cfg.seed << '\n'
           << "classes " << ds.class_count() << '\n'
           << "train_songs " << train.song_ids().size() << '\n'
           << "test_songs " << test.song_ids().size() << '\n'
           << "train_segments " << train.rows.size() << '\n'
           << "test_segments " << test.rows.size() << '\n'
           << "correct " << correct << '\n'
           << "accuracy " << learn::format_percent(acc) << '\n'
           << "chance " << learn::format_percent(1.0 / static_cast<double>(ds.class_count())) << '\n'
           << extra.str();
    write_text(cfg.out / ("classify_" + stem + ".txt"), report.str());
    progress.line("classify: " + stem + " accuracy " + learn::format_percent(acc) + " (chance " +
                  learn::format_percent(1.0 / static_cast<double>(ds.class_count())) + ")");
    return kOk;
}

int cmd_rank(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    if (cfg.matrix.empty()) throw UsageError("rank: --matrix is required");
    const auto matrix = corpus::read_similarity_csv(cfg.matrix);
    const auto ranking = corpus::representativeness(matrix);
    ensure_dir(cfg.out);
    const auto path = cfg.out / (cfg.matrix.stem().string() + "_ranking.csv");
    corpus::write_representativeness_csv(path, ranking);
    if (!ranking.empty()) progress.line("rank: most representative " + ranking.front().label);
    return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    if (cfg.summaries.empty() || cfg.summaries_b.empty())
        throw UsageError("compare: --summaries and --summaries-b are required");
    const auto a = features::read_summaries_csv(cfg.summaries);
    const auto b_raw = features::read_summaries_csv(cfg.summaries_b);
    if (a.size() != b_raw.size())
        throw Error(ErrorCode::length_mismatch, "compare: the two summary files list different songs");
    std::map<std::string, const features::SongSummary*> by_id;
    for (const auto& s : b_raw) by_id[s.song_id] = &s;
    std::vector<features::SongSummary> b;
    for (const auto& s : a) {
        const auto it = by_id.find(s.song_id);
        if (it == by_id.end())
            throw Error(ErrorCode::length_mismatch, "compare: song '" + s.song_id + "' missing from second file");
        b.push_back(*it->second);
    }
    std::vector<csv::Row> rows{{"feature", "name", "spearman"}};
    for (std::size_t f = 0; f < features::kFeatureCount; ++f)
        rows.push_back({std::to_string(f), features::feature_name(f), csv::sig(corpus::compare_versions(a, b, f), 9)});
    ensure_dir(cfg.out);
    csv::write(cfg.out / "compare.csv", rows);
    progress.line("compare: " + std::to_string(a.size()) + " songs");
    return kOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& diag)
{
    Progress progress(cfg, diag);
    const auto tracks = require_manifest(cfg);
    ensure_dir(cfg.out);
    int status = cmd_extract(cfg, diag);
    status = std::max(status, cmd_chords(cfg, diag));

    RunConfig sim = cfg;
    sim.level = "album";
    for (const auto& name : corpus::subset_names()) {
        sim.subset = name;
        status = std::max(status, cmd_similarity(sim, diag));
    }
    sim.level = "song";
    sim.subset = "all";
    status = std::max(status, cmd_similarity(sim, diag));

    try {
        status = std::max(status, cmd_trend(cfg, diag));
    } catch (const Error& e) {
        progress.failure(std::string("trend: ") + e.what());
        status = std::max<int>(status, kDataFailure);
    }

    // ranked from the full-precision matrices rather than the 4-decimal files
    for (const auto* level : {"song", "album"}) {
        RunConfig rank = cfg;
        rank.level = level;
        rank.subset = "all";
        const auto ranking = corpus::representativeness(compute_similarity(rank));
        corpus::write_representativeness_csv(cfg.out / (similarity_stem(rank) + "_ranking.csv"), ranking);
        progress.line(std::string("rank: ") + level + " most representative " + ranking.front().label);
    }

    std::vector<csv::Row> rows{{"year", "songs"}};
    for (const auto& [year, n] : corpus::releases_by_year(tracks))
        rows.push_back({std::to_string(year), std::to_string(n)});
    csv::write(cfg.out / "releases_by_year.csv", rows);
    return status;
}

int run_command(const RunConfig& cfg, std::ostream& diag)
{
    static const std::map<std::string, int (*)(const RunConfig&, std::ostream&)> table{
        {"synth", cmd_synth},           {"extract", cmd_extract}, {"chords", cmd_chords},
        {"similarity", cmd_similarity}, {"trend", cmd_trend},     {"classify", cmd_classify},
        {"rank", cmd_rank},             {"compare", cmd_compare}, {"report", cmd_report},
    };
    const auto it = table.find(cfg.command);
    if (it == table.end()) {
        diag << "error: unknown command '" << cfg.command << "'\n";
        return kUsage;
    }
    try {
        return it->second(cfg, diag);
    } catch (const UsageError& e) {
        diag << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        diag << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kDataFailure;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return kDataFailure;
    }
}

}  // namespace mircorpus::cli
