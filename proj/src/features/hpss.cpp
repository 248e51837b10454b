#include <algorithm>
#include <cmath>

#include "mircorpus/error.hpp"
#include "mircorpus/features/hpss.hpp"

namespace mircorpus::features {

std::vector<double> median_filter(std::span<const double> values, int kernel)
{
    if (kernel < 1 || kernel % 2 == 0)
        throw Error(ErrorCode::invalid_argument, "median_filter: kernel must be odd");
    const auto pad = static_cast<std::size_t>(kernel / 2);
    std::vector<double> padded(values.size() + 2 * pad, 0.0);
    std::copy(values.begin(), values.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

    std::vector<double> out(values.size());
    std::vector<double> window(static_cast<std::size_t>(kernel));
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::copy_n(padded.begin() + static_cast<std::ptrdiff_t>(i), kernel, window.begin());
        std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(pad), window.end());
        out[i] = window[pad];
    }
    return out;
}

HpssSignals hpss(const signal::ComplexSpectrogram& spectrum, std::size_t length)
{
    const std::size_t frames = spectrum.frames.size();
    if (frames == 0)
        return {std::vector<double>(length, 0.0), std::vector<double>(length, 0.0)};
    const std::size_t bins = spectrum.frames.front().size();

    // harmonic medians along time, bin-major so each filter reads contiguously
    std::vector<float> harmonic_med(frames * bins);
    std::vector<double> track(frames);
    for (std::size_t k = 0; k < bins; ++k) {
        for (std::size_t i = 0; i < frames; ++i)
            track[i] = std::abs(spectrum.frames[i][k]);
        const auto med = median_filter(track, kHpssKernel);
        for (std::size_t i = 0; i < frames; ++i)
            harmonic_med[k * frames + i] = static_cast<float>(med[i]);
    }

    signal::ComplexSpectrogram harmonic{{}, spectrum.fft_size, spectrum.hop};
    signal::ComplexSpectrogram percussive{{}, spectrum.fft_size, spectrum.hop};
    harmonic.frames.resize(frames);
    percussive.frames.resize(frames);
    std::vector<double> mag(bins);
    for (std::size_t i = 0; i < frames; ++i) {
        const auto& frame = spectrum.frames[i];
        for (std::size_t k = 0; k < bins; ++k)
            mag[k] = std::abs(frame[k]);
        const auto perc_med = median_filter(mag, kHpssKernel);
        harmonic.frames[i].resize(bins);
        percussive.frames[i].resize(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            const double h = harmonic_med[k * frames + i];
            const double p = perc_med[k];
            const double h2 = h * h, p2 = p * p;
            const double denom = h2 + p2;
            const double mask_h = denom > 0.0 ? h2 / denom : 0.0;
            const double mask_p = denom > 0.0 ? p2 / denom : 0.0;
            harmonic.frames[i][k] = frame[k] * mask_h;
            percussive.frames[i][k] = frame[k] * mask_p;
        }
    }
    HpssSignals out;
    out.harmonic = signal::istft(harmonic, length);
    harmonic.frames.clear();
    out.percussive = signal::istft(percussive, length);
    return out;
}

}  // namespace mircorpus::features
