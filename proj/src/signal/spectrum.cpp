#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "mircorpus/error.hpp"
#include "mircorpus/signal/spectrum.hpp"

namespace mircorpus::signal {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

bool is_power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

}  // namespace

struct RealFft::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

RealFft::RealFft(int size) : size_(size), plans_(std::make_unique<Plans>())
{
    if (!is_power_of_two(size))
        throw Error(ErrorCode::invalid_argument, "fft size must be a power of two");
    std::vector<double> real(static_cast<std::size_t>(size));
    std::vector<Complex> spec(static_cast<std::size_t>(size / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_1d(size, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->inverse = fftw_plan_dft_c2r_1d(size, c, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

RealFft::~RealFft()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plans_->forward);
    fftw_destroy_plan(plans_->inverse);
}

void RealFft::forward(std::span<const double> input, std::span<Complex> output) const
{
    // r2c never overwrites its input, so the const_cast is safe
    fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(input.data()),
                         reinterpret_cast<fftw_complex*>(output.data()));
}

void RealFft::inverse(std::span<const Complex> input, std::span<double> output) const
{
    std::vector<Complex> scratch(input.begin(), input.end());  // c2r destroys its input
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(scratch.data()),
                         output.data());
}

std::vector<double> hann_window(int size)
{
    std::vector<double> w(static_cast<std::size_t>(size));
    for (int n = 0; n < size; ++n)
        w[static_cast<std::size_t>(n)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / size);
    return w;
}

std::size_t frame_count(std::size_t length, int fft_size, int hop)
{
    const auto n = static_cast<std::size_t>(fft_size);
    if (length < n)
        return 0;
    return (length - n) / static_cast<std::size_t>(hop) + 1;
}

ComplexSpectrogram stft_complex(std::span<const double> samples, int fft_size, int hop)
{
    if (!is_power_of_two(fft_size) || hop <= 0 || hop > fft_size)
        throw Error(ErrorCode::invalid_argument, "stft: fft_size must be a power of two >= hop > 0");
    if (samples.size() < static_cast<std::size_t>(fft_size))
        throw Error(ErrorCode::too_short, "stft: input shorter than one analysis frame");

    const RealFft fft(fft_size);
    const auto window = hann_window(fft_size);
    const std::size_t frames = frame_count(samples.size(), fft_size, hop);

    ComplexSpectrogram out;
    out.fft_size = fft_size;
    out.hop = hop;
    out.frames.resize(frames);
    std::vector<double> buf(static_cast<std::size_t>(fft_size));
    for (std::size_t i = 0; i < frames; ++i) {
        const auto offset = i * static_cast<std::size_t>(hop);
        for (std::size_t n = 0; n < buf.size(); ++n)
            buf[n] = samples[offset + n] * window[n];
        out.frames[i].resize(static_cast<std::size_t>(fft_size / 2 + 1));
        fft.forward(buf, out.frames[i]);
    }
    return out;
}

Spectrogram magnitudes(const ComplexSpectrogram& spectrum, int sample_rate)
{
    Spectrogram out;
    out.fft_size = spectrum.fft_size;
    out.hop = spectrum.hop;
    out.sample_rate = sample_rate;
    out.frames.reserve(spectrum.frames.size());
    out.frame_times.reserve(spectrum.frames.size());
    for (std::size_t i = 0; i < spectrum.frames.size(); ++i) {
        std::vector<double> mag(spectrum.frames[i].size());
        for (std::size_t k = 0; k < mag.size(); ++k)
            mag[k] = std::abs(spectrum.frames[i][k]);
        out.frames.push_back(std::move(mag));
        out.frame_times.push_back(static_cast<double>(i * static_cast<std::size_t>(spectrum.hop)) /
                                  sample_rate);
    }
    return out;
}

Spectrogram stft(const AudioBuffer& buffer, int fft_size, int hop)
{
    return magnitudes(stft_complex(buffer.samples, fft_size, hop), buffer.sample_rate);
}

Spectrogram stft_aligned(const AudioBuffer& buffer, int fft_size)
{
    if (fft_size < kFftSize || fft_size % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "stft_aligned: fft size must be even and >= 2048");
    const std::size_t frames = frame_count(buffer.size(), kFftSize, kHopSize);
    if (frames == 0) throw Error(ErrorCode::too_short, "stft_aligned: fewer samples than one frame");
    const auto pad = static_cast<std::size_t>((fft_size - kFftSize) / 2);
    std::vector<double> padded(buffer.size() + 2 * pad, 0.0);
    std::copy(buffer.samples.begin(), buffer.samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));
    auto spectrum = stft_complex(padded, fft_size, kHopSize);
    spectrum.frames.resize(frames);
    return magnitudes(spectrum, buffer.sample_rate);
}

std::vector<double> istft(const ComplexSpectrogram& spectrum, std::size_t length)
{
    const RealFft fft(spectrum.fft_size);
    const auto window = hann_window(spectrum.fft_size);
    const auto n = static_cast<std::size_t>(spectrum.fft_size);
    const auto hop = static_cast<std::size_t>(spectrum.hop);

    std::vector<double> out(length, 0.0);
    std::vector<double> weight(length, 0.0);
    std::vector<double> frame(n);
    for (std::size_t i = 0; i < spectrum.frames.size(); ++i) {
        fft.inverse(spectrum.frames[i], frame);
        const std::size_t offset = i * hop;
        for (std::size_t k = 0; k < n && offset + k < length; ++k) {
            // analysis-only windowing: overlap-add then divide by the summed window
            out[offset + k] += frame[k] / static_cast<double>(n);
            weight[offset + k] += window[k];
        }
    }
    for (std::size_t k = 0; k < length; ++k)
        out[k] = weight[k] > 1e-3 ? out[k] / weight[k] : 0.0;
    return out;
}

}  // namespace mircorpus::signal
