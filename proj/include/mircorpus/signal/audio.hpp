#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mircorpus::signal {

inline constexpr int kSampleRate = 44100;

/// Mono audio at kSampleRate, samples in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = kSampleRate;

    std::size_t size() const noexcept { return samples.size(); }
    double duration() const noexcept {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

enum class SampleFormat { pcm16, pcm24, float32 };

/// Raw decoded WAV contents before mono mixing and resampling.
struct WavData {
    int sample_rate = kSampleRate;
    std::vector<std::vector<double>> channels;  // one vector per channel, equal lengths
};

/// Decodes a PCM WAV (16/24-bit int or 32-bit float, any channel count).
/// Throws Error{io | malformed_header | unsupported_encoding}; the message names the file.
WavData read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const WavData& data,
               SampleFormat format = SampleFormat::pcm16);
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               SampleFormat format = SampleFormat::pcm16);

/// Reads a WAV file, mixes channels by per-sample mean and resamples to 44.1 kHz.
AudioBuffer load_audio(const std::filesystem::path& path);

/// Kaiser-windowed sinc resampler (beta 8). Output length is round(n * to / from).
std::vector<double> resample(std::span<const double> input, int from_rate, int to_rate);

}  // namespace mircorpus::signal
