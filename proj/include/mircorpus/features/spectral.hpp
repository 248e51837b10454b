#pragma once

#include <span>
#include <vector>

// Single-frame spectral descriptors. `power` and `magnitude` are one-sided
// spectra of fft_size/2 + 1 bins; bin k sits at k * sample_rate / fft_size Hz.
namespace mircorpus::features {

struct BinGrid {
    int fft_size = 2048;
    int sample_rate = 44100;

    double frequency(std::size_t bin) const noexcept
    {
        return static_cast<double>(bin) * sample_rate / fft_size;
    }
};

/// Sum of power over bins with lo <= f < hi.
double band_energy(std::span<const double> power, BinGrid grid, double lo_hz, double hi_hz);

/// Sum over 40 Bark-spaced bands of (band power)^0.23.
class LoudnessModel {
public:
    explicit LoudnessModel(BinGrid grid = {});
    double operator()(std::span<const double> power) const;

private:
    std::vector<int> band_of_bin_;  // -1 for the DC bin
};

/// 42 triangular mel bands, log with 1e-10 floor, orthonormal DCT-II,
/// coefficients 1..12 returned.
class MfccModel {
public:
    static constexpr int kBands = 42;
    static constexpr int kCoefficients = 12;

    explicit MfccModel(BinGrid grid = {});
    std::vector<double> operator()(std::span<const double> power) const;

private:
    std::vector<std::vector<double>> filters_;  // kBands x bins
};

/// Magnitude-weighted mean frequency; 0 for an all-zero frame.
double spectral_centroid(std::span<const double> magnitude, BinGrid grid);

/// Lowest bin frequency at which cumulative power reaches `fraction` of the total.
double spectral_percentile(std::span<const double> power, BinGrid grid, double fraction);

/// Geometric / arithmetic mean of power, with bins floored at 1e-12 of the
/// frame maximum so the measure is scale invariant. 0 for silence.
double spectral_flatness(std::span<const double> power);

/// Shannon entropy of the normalised power distribution divided by log(bins).
double spectral_entropy(std::span<const double> power);

/// Jensen-Shannon divergence (base 2, in [0, 1]) between two probability vectors.
double js_divergence(std::span<const double> p, std::span<const double> q);

/// Sethares roughness of one partial pair.
double sethares_dissonance(double f1, double a1, double f2, double a2);

/// Dissonance from up to 10 strongest peaks of a magnitude spectrum.
double sensory_dissonance(std::span<const double> magnitude, BinGrid grid);

/// Energy fraction in the two finest detail levels of a 5-level periodic D4
/// wavelet decomposition; 0 for silence.
double transientness(std::span<const double> frame);

/// Periodic, orthonormal 4-tap Daubechies transform in place (levels >= 1).
void daubechies4(std::vector<double>& data, int levels);

}  // namespace mircorpus::features
