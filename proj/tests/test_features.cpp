#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mircorpus/error.hpp"
#include "mircorpus/features/features.hpp"
#include "mircorpus/features/hpss.hpp"
#include "mircorpus/features/rhythm.hpp"
#include "mircorpus/features/spectral.hpp"
#include "mircorpus/signal/synth.hpp"
#include "test_support.hpp"

using namespace mircorpus;
using namespace mircorpus::features;
namespace f = mircorpus::features::feature;

namespace {

// Frames well clear of the 2 s warm-up and the final window.
std::vector<const FeatureFrame*> steady(const FeatureTrail& trail, double duration)
{
    std::vector<const FeatureFrame*> out;
    for (const auto& fr : trail.frames)
        if (fr.t >= 2.1 && fr.t + 2048.0 / 44100.0 <= duration - 0.1) out.push_back(&fr);
    return out;
}

double steady_mean(const FeatureTrail& trail, double duration, std::size_t index)
{
    const auto frames = steady(trail, duration);
    double s = 0.0;
    for (const auto* fr : frames) s += fr->values[index];
    return s / static_cast<double>(frames.size());
}

double steady_max(const FeatureTrail& trail, double duration, std::size_t index)
{
    double m = -INFINITY;
    for (const auto* fr : steady(trail, duration)) m = std::max(m, fr->values[index]);
    return m;
}

double steady_min(const FeatureTrail& trail, double duration, std::size_t index)
{
    double m = INFINITY;
    for (const auto* fr : steady(trail, duration)) m = std::min(m, fr->values[index]);
    return m;
}

const FeatureTrail& silence_trail()
{
    static const FeatureTrail t = [] {
        signal::AudioBuffer b;
        b.samples.assign(5 * 44100, 0.0);
        return extract_features(b, "silence");
    }();
    return t;
}

const FeatureTrail& sine_trail()
{
    static const FeatureTrail t = extract_features(signal::synth_tone(1000.0, 5.0, 0.5), "sine");
    return t;
}

const FeatureTrail& noise_trail()
{
    static const FeatureTrail t = extract_features(signal::synth_noise(5.0, 7), "noise");
    return t;
}

const FeatureTrail& click_trail()
{
    static const FeatureTrail t = extract_features(signal::synth_clicks(0.5, 10.0), "clicks");
    return t;
}

double rel_diff(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("trail layout")
{
    const auto& t = sine_trail();
    CHECK(t.song_id == "sine");
    CHECK(t.frames.size() == (5 * 44100 - 2048) / 1024 + 1);
    for (std::size_t i = 0; i < t.frames.size(); ++i) CHECK(t.frames[i].t == doctest::Approx(i * 1024.0 / 44100.0));
    CHECK(std::string(feature_name(f::tempo)).size() > 0);
}

TEST_CASE("extract rejects audio shorter than 2 s")
{
    signal::AudioBuffer b;
    b.samples.assign(44100, 0.1);
    CHECK_THROWS_AS(extract_features(b), Error);
    try {
        extract_features(b);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::too_short);
    }
}

TEST_CASE("silence gives zero loudness, energies and onsets")
{
    for (const auto& fr : silence_trail().frames) {
        CHECK(fr.values[f::loudness] == 0.0);
        CHECK(fr.values[f::energy_low] == 0.0);
        CHECK(fr.values[f::energy_mid] == 0.0);
        CHECK(fr.values[f::energy_high] == 0.0);
        CHECK(fr.values[f::onset_density] == 0.0);
        CHECK(fr.values[f::perc_onset_density] == 0.0);
    }
}

TEST_CASE("every feature is finite for every fixture")
{
    for (const auto* trail : {&silence_trail(), &sine_trail(), &noise_trail(), &click_trail()})
        for (const auto& fr : trail->frames)
            for (double v : fr.values) REQUIRE(std::isfinite(v));
}

TEST_CASE("non-negative features stay non-negative and tempo is 0 or in (0, 300]")
{
    for (const auto* trail : {&silence_trail(), &sine_trail(), &noise_trail(), &click_trail()})
        for (const auto& fr : trail->frames) {
            for (std::size_t i : {f::loudness, f::energy_low, f::energy_mid, f::energy_high, f::harmonicity,
                                  f::percussiveness, f::perc_onset_density})
                CHECK(fr.values[i] >= 0.0);
            const double tempo = fr.values[f::tempo];
            CHECK((tempo == 0.0 || (tempo > 0.0 && tempo <= 300.0)));
        }
}

TEST_CASE("memory features are zero during the 2 s warm-up")
{
    for (const auto* trail : {&noise_trail(), &click_trail()})
        for (const auto& fr : trail->frames) {
            if (fr.t + 2048.0 / 44100.0 / 2.0 >= 2.0) break;
            CHECK(fr.values[f::js_divergence] == 0.0);
            for (std::size_t i = f::perc_onset_density; i <= f::tempo; ++i) CHECK(fr.values[i] == 0.0);
        }
}

TEST_CASE("sine centroid sits at its frequency")
{
    for (const auto* fr : steady(sine_trail(), 5.0))
        CHECK(std::abs(fr->values[f::centroid] - 1000.0) <= 22.0);
}

TEST_CASE("noise is more than ten times flatter than a sine")
{
    const double sine = steady_max(sine_trail(), 5.0, f::flatness);
    const double noise = steady_min(noise_trail(), 5.0, f::flatness);
    CHECK(noise > 10.0 * sine);
}

TEST_CASE("noise entropy exceeds sine entropy")
{
    CHECK(steady_min(noise_trail(), 5.0, f::entropy) > steady_max(sine_trail(), 5.0, f::entropy));
}

TEST_CASE("stationary tone has negligible JS divergence")
{
    CHECK(steady_max(sine_trail(), 5.0, f::js_divergence) < 1e-3);
}

TEST_CASE("harmonic and percussive energy separate tones from clicks")
{
    CHECK(steady_mean(sine_trail(), 5.0, f::harmonicity) > 5.0 * steady_mean(sine_trail(), 5.0, f::percussiveness));
    CHECK(steady_mean(click_trail(), 10.0, f::percussiveness) >
          5.0 * steady_mean(click_trail(), 10.0, f::harmonicity));
}

TEST_CASE("click train at 0.5 s: density, IOI and tempo")
{
    for (const auto* fr : steady(click_trail(), 10.0)) {
        CHECK(fr->values[f::onset_density] == 4.0);
        CHECK(std::abs(fr->values[f::ioi_mean] - 0.5) <= 0.03);
        CHECK(fr->values[f::ioi_std] < 0.02);
        CHECK(std::abs(fr->values[f::tempo] - 120.0) <= 2.0);
    }
}

TEST_CASE("scaling the input leaves shape features unchanged and scales energies by g^2")
{
    const auto base = signal::mix(std::vector<signal::AudioBuffer>{signal::synth_noise(4.0, 3, 0.2),
                                                                   signal::synth_clicks(0.5, 4.0)});
    const auto a = extract_features(base);
    for (double g : {0.5, 0.3}) {
        const auto b = extract_features(signal::scaled(base, g));
        REQUIRE(a.frames.size() == b.frames.size());
        for (std::size_t i = 0; i < a.frames.size(); ++i) {
            const auto& va = a.frames[i].values;
            const auto& vb = b.frames[i].values;
            for (std::size_t k = f::centroid; k <= f::entropy; ++k) CHECK(rel_diff(va[k], vb[k]) <= 1e-6);
            CHECK(rel_diff(va[f::tempo], vb[f::tempo]) <= 1e-6);
            for (std::size_t k = f::energy_low; k <= f::energy_high; ++k)
                CHECK(rel_diff(va[k] * g * g, vb[k]) <= 1e-6);
        }
    }
}

TEST_CASE("sensory dissonance follows the Sethares ordering")
{
    auto dissonance_of = [&](const signal::AudioBuffer& b) {
        const auto trail = extract_features(b);
        return steady_mean(trail, b.duration(), f::dissonance);
    };
    const auto a4 = signal::synth_tone(440.0, 4.0, 0.4);
    const auto minor_second = signal::mix(std::vector<signal::AudioBuffer>{a4, signal::synth_tone(466.0, 4.0, 0.4)});
    const auto octave = signal::mix(std::vector<signal::AudioBuffer>{a4, signal::synth_tone(880.0, 4.0, 0.4)});
    const double single = dissonance_of(a4);
    const double close = dissonance_of(minor_second);
    const double wide = dissonance_of(octave);
    CHECK(single < 1e-6);
    CHECK(close > wide);
    CHECK(close > 0.1);
}

TEST_CASE("sethares pair formula")
{
    const double s = 0.24 / (0.021 * 440.0 + 19.0);
    const double expected = 0.5 * (std::exp(-3.5 * s * 26.0) - std::exp(-5.75 * s * 26.0));
    CHECK(sethares_dissonance(440.0, 1.0, 466.0, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sethares_dissonance(466.0, 0.5, 440.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(sethares_dissonance(440.0, 1.0, 440.0, 1.0) == 0.0);
}

TEST_CASE("flat spectrum entropy is exactly 1 and a single line is 0")
{
    std::vector<double> flat(1025, 3.0);
    CHECK(spectral_entropy(flat) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> line(1025, 0.0);
    line[40] = 1.0;
    CHECK(spectral_entropy(line) == 0.0);
    CHECK(spectral_flatness(flat) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("js divergence bounds")
{
    std::vector<double> p{0.5, 0.5, 0.0, 0.0}, q{0.0, 0.0, 0.5, 0.5}, r{0.25, 0.25, 0.25, 0.25};
    CHECK(js_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(js_divergence(p, q) == doctest::Approx(1.0).epsilon(1e-12));
    // p vs uniform, by hand: M = (3/8, 3/8, 1/8, 1/8)
    const double kl_p = 2 * 0.5 * std::log2(0.5 / 0.375);
    const double kl_r = 2 * 0.25 * std::log2(0.25 / 0.375) + 2 * 0.25 * std::log2(0.25 / 0.125);
    CHECK(js_divergence(p, r) == doctest::Approx(0.5 * (kl_p + kl_r)).epsilon(1e-12));
}

TEST_CASE("centroid and percentiles on hand-built spectra")
{
    const BinGrid grid;
    std::vector<double> mag(1025, 0.0);
    mag[10] = 1.0;
    mag[30] = 3.0;
    const double expected = (grid.frequency(10) * 1.0 + grid.frequency(30) * 3.0) / 4.0;
    CHECK(spectral_centroid(mag, grid) == doctest::Approx(expected).epsilon(1e-12));
    std::vector<double> power(1025, 0.0);
    power[10] = 1.0;
    power[20] = 1.0;
    power[30] = 8.0;
    CHECK(spectral_percentile(power, grid, 0.5) == doctest::Approx(grid.frequency(30)));
    CHECK(spectral_percentile(power, grid, 0.15) == doctest::Approx(grid.frequency(20)));
    CHECK(spectral_percentile(power, grid, 0.05) == doctest::Approx(grid.frequency(10)));
}

TEST_CASE("band energy boundaries")
{
    const BinGrid grid;
    std::vector<double> power(1025, 1.0);
    // bins below 400 Hz: k * 44100/2048 < 400 -> k <= 18
    CHECK(band_energy(power, grid, 0.0, 400.0) == 19.0);
}

TEST_CASE("daubechies transform is orthonormal")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n;
    std::vector<double> x(2048);
    for (double& v : x) v = n(rng);
    const double before = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    auto y = x;
    daubechies4(y, 5);
    const double after = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
    // constant signal has no detail energy
    std::vector<double> c(2048, 1.0);
    CHECK(transientness(c) < 1e-20);
    std::vector<double> z(2048, 0.0);
    CHECK(transientness(z) == 0.0);
    std::vector<double> spike(2048, 0.0);
    spike[1001] = 1.0;
    CHECK(transientness(spike) > 0.5);
}

TEST_CASE("median filter uses zero padding")
{
    std::vector<double> x{5, 1, 4, 2, 3};
    const auto m = median_filter(x, 3);
    CHECK(m == std::vector<double>{1, 4, 2, 3, 2});
}

TEST_CASE("onset stats over an integer window")
{
    const std::vector<long> onsets{0, 22050, 44100, 66150, 88200};
    const auto s = onset_stats(onsets, 88200, 88200);
    CHECK(s.count == 4.0);
    CHECK(s.ioi_mean == doctest::Approx(0.5));
    CHECK(s.ioi_std == doctest::Approx(0.0));
    const auto uneven = onset_stats(std::vector<long>{44100, 55125, 88200}, 88200, 88200);
    CHECK(uneven.count == 3.0);
    CHECK(uneven.ioi_mean == doctest::Approx(0.5));
    CHECK(uneven.ioi_std == doctest::Approx(0.25));
}

TEST_CASE("metrical level choice")
{
    CHECK(choose_metrical_level(120.0) == doctest::Approx(120.0));
    CHECK(choose_metrical_level(60.0) == doctest::Approx(120.0));
    CHECK(choose_metrical_level(240.0) == doctest::Approx(120.0));
    CHECK(choose_metrical_level(90.0) == doctest::Approx(90.0));
    CHECK(choose_metrical_level(0.0) == 0.0);
}

TEST_CASE("beat stats of a single-peak histogram")
{
    std::vector<double> h(kMaxBeatLag - kMinBeatLag + 1, 0.0);
    h[50 - kMinBeatLag] = 1.0;
    const auto s = beat_stats(h);
    CHECK(s.entropy == doctest::Approx(0.0));
    CHECK(s.simpson == doctest::Approx(1.0));
    CHECK(s.peak_ratio == 1000.0);
    CHECK(s.metricity == doctest::Approx(1.0));
    CHECK(s.tempo == doctest::Approx(120.0));
}

TEST_CASE("windowed means")
{
    FeatureTrail constant;
    for (int i = 0; i < 300; ++i) {
        FeatureFrame fr;
        fr.t = i * kFramePeriod;
        fr.values.fill(2.5);
        constant.frames.push_back(fr);
    }
    for (const auto& w : windowed_means(constant)) CHECK(w.values[7] == doctest::Approx(2.5).epsilon(1e-15));

    FeatureTrail four = constant;
    four.frames.resize(173);  // 4.017 s
    const auto w4 = windowed_means(four);
    REQUIRE(w4.size() == 3);
    CHECK(w4[0].t == 0.0);
    CHECK(w4[1].t == doctest::Approx(1.0));
    CHECK(w4[2].t == doctest::Approx(2.0));

    FeatureTrail alt = constant;
    for (std::size_t i = 0; i < alt.frames.size(); ++i) alt.frames[i].values.fill(static_cast<double>(i % 2));
    const double frames_per_window = 2.0 / kFramePeriod;
    for (const auto& w : windowed_means(alt)) {
        // direct oracle over frames with t in [w.t, w.t + 2)
        double s = 0.0;
        int n = 0;
        for (const auto& fr : alt.frames)
            if (fr.t >= w.t - 1e-9 && fr.t < w.t + 2.0 - 1e-9) {
                s += fr.values[0];
                ++n;
            }
        CHECK(w.values[0] == doctest::Approx(s / n).epsilon(1e-12));
        CHECK(std::abs(w.values[0] - 0.5) <= 1.0 / frames_per_window);
    }

    FeatureTrail tiny = constant;
    tiny.frames.resize(20);
    CHECK_THROWS_AS(windowed_means(tiny), Error);
}

TEST_CASE("song summary")
{
    FeatureTrail one;
    FeatureFrame fr;
    for (std::size_t i = 0; i < kFeatureCount; ++i) fr.values[i] = static_cast<double>(i) + 0.5;
    one.frames.push_back(fr);
    CHECK(song_summary(one).means == fr.values);

    FeatureTrail two;
    FeatureFrame a, b;
    a.values.fill(1.0);
    b.t = 1.0;
    b.values.fill(3.0);
    two.frames = {a, b};
    for (double v : song_summary(two).means) CHECK(v == 2.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    FeatureTrail rnd;
    for (int i = 0; i < 10; ++i) {
        FeatureFrame x;
        x.t = i * kFramePeriod;
        for (double& v : x.values) v = u(rng);
        x.values[f::tempo] = 60.0 + i;
        rnd.frames.push_back(x);
    }
    const auto s = song_summary(rnd);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
        double sum = 0.0, lo = INFINITY, hi = -INFINITY;
        for (const auto& x : rnd.frames) {
            sum += x.values[k];
            lo = std::min(lo, x.values[k]);
            hi = std::max(hi, x.values[k]);
        }
        CHECK(rel_diff(s.means[k], sum / 10.0) <= 1e-12);
        CHECK(s.means[k] >= lo);
        CHECK(s.means[k] <= hi);
    }

    // tempo zeros do not drag the mean down
    rnd.frames[0].values[f::tempo] = 0.0;
    double tempo_sum = 0.0;
    for (int i = 1; i < 10; ++i) tempo_sum += 60.0 + i;
    CHECK(song_summary(rnd).means[f::tempo] == doctest::Approx(tempo_sum / 9.0));

    CHECK_THROWS_AS(song_summary(FeatureTrail{}), Error);
}

TEST_CASE("trail and summary CSV round trip")
{
    const auto dir = scratch_dir("features");
    const auto& t = click_trail();
    write_trail_csv(dir / "clicks.csv", t);
    const auto back = read_trail_csv(dir / "clicks.csv", "clicks");
    REQUIRE(back.frames.size() == t.frames.size());
    for (std::size_t i = 0; i < t.frames.size(); ++i)
        for (std::size_t k = 0; k < kFeatureCount; ++k)
            CHECK(rel_diff(back.frames[i].values[k], t.frames[i].values[k]) <= 1e-8);

    std::vector<SongSummary> rows{song_summary(sine_trail()), song_summary(noise_trail())};
    rows[0].song_id = "a,b";
    write_summaries_csv(dir / "summaries.csv", rows);
    const auto rows_back = read_summaries_csv(dir / "summaries.csv");
    REQUIRE(rows_back.size() == 2);
    CHECK(rows_back[0].song_id == "a,b");
    for (std::size_t k = 0; k < kFeatureCount; ++k) CHECK(rel_diff(rows_back[1].means[k], rows[1].means[k]) <= 1e-8);
}
