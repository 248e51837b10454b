#include <algorithm>
#include <cmath>
#include <deque>

#include "mircorpus/error.hpp"
#include "mircorpus/features/features.hpp"
#include "mircorpus/features/hpss.hpp"
#include "mircorpus/features/rhythm.hpp"
#include "mircorpus/features/spectral.hpp"
#include "mircorpus/signal/spectrum.hpp"

namespace mircorpus::features {

namespace {

constexpr int kFft = signal::kFftSize;
constexpr int kHop = signal::kHopSize;
constexpr int kDissonanceFft = 8192;
constexpr long kMemorySamples = 2 * signal::kSampleRate;
constexpr long kBeatWindowSamples = 6 * signal::kSampleRate;

constexpr const char* kNames[kFeatureCount] = {
    "loudness", "sensory_dissonance", "energy_low", "energy_mid", "energy_high",
    "mfcc1", "mfcc2", "mfcc3", "mfcc4", "mfcc5", "mfcc6", "mfcc7", "mfcc8", "mfcc9", "mfcc10",
    "mfcc11", "mfcc12", "spectral_centroid", "spectral_percentile_50", "spectral_percentile_90",
    "spectral_flatness", "js_divergence", "spectral_entropy", "transientness", "harmonicity",
    "percussiveness", "perc_onset_density", "perc_ioi_mean", "perc_ioi_std", "perc_beat_entropy",
    "perc_beat_ratio", "perc_beat_diversity", "perc_beat_metricity", "onset_density", "ioi_mean",
    "ioi_std", "beat_entropy", "beat_ratio", "beat_diversity", "beat_metricity", "tempo"};

double rms(std::span<const double> x, std::size_t begin, std::size_t count)
{
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = begin; i < begin + count && i < x.size(); ++i, ++n)
        acc += x[i] * x[i];
    return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

// Rhythm features for one signal path (percussive part or whole signal).
struct RhythmTrack {
    std::vector<double> odf;
    std::vector<long> onsets;

    explicit RhythmTrack(std::span<const double> samples)
        : odf(onset_detection_function(samples)), onsets(pick_onsets(odf))
    {
    }

    // Writes count, IOI mean/std, then four beat statistics starting at `first`;
    // returns the tempo estimate.
    double fill(FeatureVector& v, std::size_t first, long reference) const
    {
        const auto s = onset_stats(onsets, reference, kMemorySamples);
        v[first] = s.count;
        v[first + 1] = s.ioi_mean;
        v[first + 2] = s.ioi_std;

        // ODF frames centred in (reference - 6 s, reference]
        const long last = std::min<long>(reference / kOnsetHop, static_cast<long>(odf.size()) - 1);
        const long begin = std::max<long>(0, (reference - kBeatWindowSamples) / kOnsetHop + 1);
        const auto hist = beat_histogram(std::span<const double>(odf).subspan(
            static_cast<std::size_t>(begin), static_cast<std::size_t>(last - begin + 1)));
        const auto b = beat_stats(hist);
        v[first + 3] = b.entropy;
        v[first + 4] = b.peak_ratio;
        v[first + 5] = b.simpson;
        v[first + 6] = b.metricity;
        return b.tempo;
    }
};

}  // namespace

const char* feature_name(std::size_t index)
{
    return index < kFeatureCount ? kNames[index] : "unknown";
}

double FeatureTrail::duration() const noexcept
{
    return static_cast<double>(frames.size()) * kFramePeriod;
}

FeatureTrail extract_features(const signal::AudioBuffer& buffer, std::string song_id)
{
    if (buffer.samples.size() < static_cast<std::size_t>(kMemorySamples))
        throw Error(ErrorCode::too_short, "extract_features: need at least 2 s of audio");
    const auto& x = buffer.samples;

    const auto spec = signal::stft_complex(x, kFft, kHop);
    const std::size_t frames = spec.frames.size();
    const std::size_t bins = static_cast<std::size_t>(kFft / 2 + 1);

    const HpssSignals parts = hpss(spec, x.size());
    const RhythmTrack whole(x);
    const RhythmTrack percussive(parts.percussive);

    const BinGrid grid{kFft, signal::kSampleRate};
    const BinGrid wide_grid{kDissonanceFft, signal::kSampleRate};
    const LoudnessModel loudness_model(grid);
    const MfccModel mfcc_model(grid);
    const signal::RealFft wide_fft(kDissonanceFft);
    const auto wide_window = signal::hann_window(kDissonanceFft);

    // one-sided power in mean-square units: a sine of amplitude A sums to ~A^2/2
    const double power_scale = 16.0 / (3.0 * kFft * static_cast<double>(kFft));

    FeatureTrail trail;
    trail.song_id = std::move(song_id);
    trail.frames.resize(frames);

    struct Past {
        std::vector<double> p;  // normalised power, empty when silent
        double plogp = 0.0;     // sum of p log2 p
    };
    std::deque<Past> history;
    std::vector<double> power(bins), magnitude(bins), distribution(bins);
    std::vector<double> wide_in(kDissonanceFft);
    std::vector<signal::Complex> wide_out(kDissonanceFft / 2 + 1);
    std::vector<double> wide_mag(wide_out.size());

    for (std::size_t i = 0; i < frames; ++i) {
        FeatureFrame& frame = trail.frames[i];
        FeatureVector& v = frame.values;
        frame.t = static_cast<double>(i * kHop) / signal::kSampleRate;

        double total_power = 0.0;
        for (std::size_t k = 0; k < bins; ++k) {
            magnitude[k] = std::abs(spec.frames[i][k]);
            power[k] = magnitude[k] * magnitude[k] * power_scale;
            total_power += power[k];
        }

        v[feature::loudness] = loudness_model(power);

        // dissonance on a longer window centred on this frame
        const long centre = static_cast<long>(i * kHop) + kFft / 2;
        for (int n = 0; n < kDissonanceFft; ++n) {
            const long s = centre - kDissonanceFft / 2 + n;
            const double sample = s >= 0 && s < static_cast<long>(x.size()) ? x[static_cast<std::size_t>(s)] : 0.0;
            wide_in[static_cast<std::size_t>(n)] = sample * wide_window[static_cast<std::size_t>(n)];
        }
        wide_fft.forward(wide_in, wide_out);
        for (std::size_t k = 0; k < wide_out.size(); ++k)
            wide_mag[k] = std::abs(wide_out[k]);
        v[feature::dissonance] = sensory_dissonance(wide_mag, wide_grid);

        v[feature::energy_low] = band_energy(power, grid, 0.0, 400.0);
        v[feature::energy_mid] = band_energy(power, grid, 3000.0 / std::sqrt(2.0), 3000.0 * std::sqrt(2.0));
        v[feature::energy_high] = band_energy(power, grid, 6000.0 + 1e-9, 1e9);

        const auto mfcc = mfcc_model(power);
        std::copy(mfcc.begin(), mfcc.end(), v.begin() + feature::mfcc_first);

        v[feature::centroid] = spectral_centroid(magnitude, grid);
        v[feature::percentile_50] = spectral_percentile(power, grid, 0.5);
        v[feature::percentile_90] = spectral_percentile(power, grid, 0.9);
        v[feature::flatness] = spectral_flatness(power);
        v[feature::entropy] = spectral_entropy(power);
        v[feature::transientness] = transientness(
            std::span<const double>(x).subspan(i * kHop, static_cast<std::size_t>(kFft)));

        const std::size_t mid = i * kHop + kHop / 2;
        v[feature::harmonicity] = rms(parts.harmonic, mid, kHop);
        v[feature::percussiveness] = rms(parts.percussive, mid, kHop);

        // memory features reference the frame centre and need 2 s of history
        const bool silent = !(total_power > 0.0);
        double plogp = 0.0;
        if (!silent)
            for (std::size_t k = 0; k < bins; ++k) {
                distribution[k] = power[k] / total_power;
                if (distribution[k] > 0.0) plogp += distribution[k] * std::log2(distribution[k]);
            }
        const long reference = centre;
        if (reference >= kMemorySamples) {
            // JS(p, q) = (sum p log p + sum q log q) / 2 - sum m log m
            double js = 0.0;
            int pairs = 0;
            for (const auto& past : history) {
                if (silent || past.p.empty())
                    continue;
                double mlogm = 0.0;
                for (std::size_t k = 0; k < bins; ++k) {
                    const double m = 0.5 * (distribution[k] + past.p[k]);
                    if (m > 0.0) mlogm += m * std::log2(m);
                }
                js += std::max(0.5 * (plogp + past.plogp) - mlogm, 0.0);
                ++pairs;
            }
            v[feature::js_divergence] = pairs ? js / pairs : 0.0;

            percussive.fill(v, feature::perc_onset_density, reference);
            v[feature::tempo] = whole.fill(v, feature::onset_density, reference);
        }

        history.push_back(silent ? Past{} : Past{distribution, plogp});
        if (history.size() > static_cast<std::size_t>(kMemorySamples / kHop))
            history.pop_front();
    }
    return trail;
}

std::vector<FeatureFrame> windowed_means(const FeatureTrail& trail, double window, double hop)
{
    if (!(window > 0.0) || !(hop > 0.0))
        throw Error(ErrorCode::invalid_argument, "windowed_means: window and hop must be positive");
    const double duration = trail.duration();
    if (trail.frames.empty() || duration + 1e-9 < window)
        throw Error(ErrorCode::too_short, "windowed_means: trail shorter than one window");

    std::vector<FeatureFrame> out;
    const double t0 = trail.frames.front().t;
    for (long w = 0;; ++w) {
        const double start = t0 + w * hop;
        if (start - t0 + window > duration + 1e-9)
            break;
        FeatureFrame mean;
        mean.t = start;
        std::size_t n = 0;
        for (const auto& f : trail.frames) {
            if (f.t + 1e-12 < start || f.t >= start + window - 1e-12)
                continue;
            for (std::size_t k = 0; k < kFeatureCount; ++k)
                mean.values[k] += f.values[k];
            ++n;
        }
        if (n)
            for (double& value : mean.values)
                value /= static_cast<double>(n);
        out.push_back(mean);
    }
    return out;
}

SongSummary song_summary(const FeatureTrail& trail)
{
    if (trail.frames.empty())
        throw Error(ErrorCode::insufficient_data, "song_summary: empty trail");
    SongSummary s;
    s.song_id = trail.song_id;
    std::size_t tempo_frames = 0;
    for (const auto& f : trail.frames) {
        for (std::size_t k = 0; k < kFeatureCount; ++k) {
            if (k == feature::tempo) {
                if (f.values[k] > 0.0) {
                    s.means[k] += f.values[k];
                    ++tempo_frames;
                }
            } else {
                s.means[k] += f.values[k];
            }
        }
    }
    const double n = static_cast<double>(trail.frames.size());
    for (std::size_t k = 0; k < kFeatureCount; ++k)
        s.means[k] /= k == feature::tempo ? std::max<double>(1.0, static_cast<double>(tempo_frames)) : n;
    return s;
}

}  // namespace mircorpus::features
