#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mircorpus/error.hpp"
#include "mircorpus/signal/synth.hpp"

namespace mircorpus::signal {

namespace {

std::size_t sample_count(double duration)
{
    if (!(duration > 0.0))
        throw Error(ErrorCode::invalid_argument, "synth: duration must be positive");
    return static_cast<std::size_t>(std::llround(duration * kSampleRate));
}

void check_frequency(double freq)
{
    if (!(freq > 0.0) || freq >= kSampleRate / 2.0)
        throw Error(ErrorCode::invalid_argument, "synth: frequency must lie in (0, Nyquist)");
}

// Portable uniform in [-1, 1): std::uniform_real_distribution is not
// specified bit-exactly across standard libraries.
double uniform_pm1(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

double midi_to_hz(double midi)
{
    return 440.0 * std::pow(2.0, (midi - 69.0) / 12.0);
}

AudioBuffer synth_tone(double freq, double duration, double amplitude)
{
    check_frequency(freq);
    AudioBuffer out;
    out.samples.resize(sample_count(duration));
    const double w = 2.0 * std::numbers::pi * freq / kSampleRate;
    for (std::size_t n = 0; n < out.samples.size(); ++n)
        out.samples[n] = amplitude * std::sin(w * static_cast<double>(n));
    return out;
}

AudioBuffer synth_noise(double duration, std::uint64_t seed, double amplitude)
{
    AudioBuffer out;
    out.samples.resize(sample_count(duration));
    std::mt19937_64 rng(seed);
    for (double& s : out.samples)
        s = amplitude * uniform_pm1(rng);
    return out;
}

AudioBuffer synth_clicks(double period, double duration)
{
    if (!(period > 0.0))
        throw Error(ErrorCode::invalid_argument, "synth_clicks: period must be positive");
    AudioBuffer out;
    out.samples.assign(sample_count(duration), 0.0);
    for (long k = 0;; ++k) {
        const auto pos = static_cast<std::size_t>(std::llround(k * period * kSampleRate));
        if (pos >= out.samples.size())
            break;
        out.samples[pos] = 1.0;
    }
    return out;
}

AudioBuffer synth_chord(std::span<const int> midi_pitches, double duration)
{
    if (midi_pitches.empty())
        throw Error(ErrorCode::invalid_argument, "synth_chord: pitch list is empty");
    AudioBuffer out;
    out.samples.assign(sample_count(duration), 0.0);
    for (int pitch : midi_pitches) {
        const double f0 = midi_to_hz(pitch);
        check_frequency(f0);
        for (int h = 1; h <= 4; ++h) {
            const double f = f0 * h;
            if (f >= kSampleRate / 2.0)
                break;
            const double w = 2.0 * std::numbers::pi * f / kSampleRate;
            const double a = 1.0 / h;
            for (std::size_t n = 0; n < out.samples.size(); ++n)
                out.samples[n] += a * std::sin(w * static_cast<double>(n));
        }
    }
    return normalized(out, 0.9);
}

AudioBuffer mix(std::span<const AudioBuffer> parts)
{
    AudioBuffer out;
    std::size_t len = 0;
    for (const auto& p : parts)
        len = std::max(len, p.size());
    out.samples.assign(len, 0.0);
    for (const auto& p : parts)
        for (std::size_t n = 0; n < p.size(); ++n)
            out.samples[n] += p.samples[n];
    return out;
}

AudioBuffer concatenate(std::span<const AudioBuffer> parts)
{
    AudioBuffer out;
    for (const auto& p : parts)
        out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
    return out;
}

AudioBuffer scaled(const AudioBuffer& buffer, double gain)
{
    AudioBuffer out = buffer;
    for (double& s : out.samples)
        s *= gain;
    return out;
}

AudioBuffer normalized(const AudioBuffer& buffer, double peak)
{
    double max_abs = 0.0;
    for (double s : buffer.samples)
        max_abs = std::max(max_abs, std::abs(s));
    if (max_abs == 0.0)
        return buffer;
    return scaled(buffer, peak / max_abs);
}

AudioBuffer add_noise(const AudioBuffer& buffer, double snr_db, std::uint64_t seed)
{
    double power = 0.0;
    for (double s : buffer.samples)
        power += s * s;
    AudioBuffer out = buffer;
    if (buffer.samples.empty() || power == 0.0)
        return out;
    power /= static_cast<double>(buffer.samples.size());
    // uniform noise on [-a, a] has power a^2 / 3
    const double noise_power = power / std::pow(10.0, snr_db / 10.0);
    const double a = std::sqrt(3.0 * noise_power);
    std::mt19937_64 rng(seed);
    for (double& s : out.samples)
        s = std::clamp(s + a * uniform_pm1(rng), -1.0, 1.0);
    return out;
}

}  // namespace mircorpus::signal
