#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "mircorpus/signal/audio.hpp"

namespace mircorpus::signal {

inline constexpr int kFftSize = 2048;
inline constexpr int kHopSize = 1024;

using Complex = std::complex<double>;

/// Real-input FFT of a fixed power-of-two size. Thread-safe once constructed.
class RealFft {
public:
    explicit RealFft(int size);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const noexcept { return size_; }

    /// input.size() == size(), output.size() == size()/2 + 1
    void forward(std::span<const double> input, std::span<Complex> output) const;
    /// Unnormalised inverse: forward followed by inverse scales by size().
    void inverse(std::span<const Complex> input, std::span<double> output) const;

private:
    struct Plans;
    int size_;
    std::unique_ptr<Plans> plans_;
};

/// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / size).
std::vector<double> hann_window(int size);

/// floor((length - fft_size) / hop) + 1, or 0 when length < fft_size.
std::size_t frame_count(std::size_t length, int fft_size, int hop);

struct ComplexSpectrogram {
    std::vector<std::vector<Complex>> frames;
    int fft_size = kFftSize;
    int hop = kHopSize;
};

struct Spectrogram {
    std::vector<std::vector<double>> frames;  // magnitudes, fft_size/2 + 1 bins each
    std::vector<double> frame_times;          // seconds, frame start
    int fft_size = kFftSize;
    int hop = kHopSize;
    int sample_rate = kSampleRate;

    std::size_t bins() const noexcept { return static_cast<std::size_t>(fft_size / 2 + 1); }
    double bin_frequency(std::size_t bin) const noexcept {
        return static_cast<double>(bin) * sample_rate / fft_size;
    }
};

/// Hann-windowed STFT. Frame i covers samples [i*hop, i*hop + fft_size).
/// Throws too_short when samples.size() < fft_size, invalid_argument on bad sizes.
ComplexSpectrogram stft_complex(std::span<const double> samples, int fft_size, int hop);

Spectrogram magnitudes(const ComplexSpectrogram& spectrum, int sample_rate = kSampleRate);

Spectrogram stft(const AudioBuffer& buffer, int fft_size = kFftSize, int hop = kHopSize);

/// Longer-window STFT whose frames share the centres of the canonical
/// 2048/1024 frames (zero padded at the ends), so frame i lines up with
/// stft(buffer).frames[i]. Requires fft_size >= kFftSize.
Spectrogram stft_aligned(const AudioBuffer& buffer, int fft_size);

/// Weighted overlap-add inverse of stft_complex; samples whose summed analysis
/// window is negligible are set to zero.
std::vector<double> istft(const ComplexSpectrogram& spectrum, std::size_t length);

}  // namespace mircorpus::signal
