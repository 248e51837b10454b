#pragma once

#include <vector>

#include "mircorpus/signal/spectrum.hpp"

namespace mircorpus::features {

inline constexpr int kHpssKernel = 17;

struct HpssSignals {
    std::vector<double> harmonic;
    std::vector<double> percussive;
};

/// Median-filter HPSS with Wiener (power 2) soft masks: median over 17 frames
/// per bin gives the harmonic estimate, over 17 bins per frame the percussive.
/// Both masked spectra are resynthesised to `length` samples.
HpssSignals hpss(const signal::ComplexSpectrogram& spectrum, std::size_t length);

/// Zero-padded running median with an odd kernel.
std::vector<double> median_filter(std::span<const double> values, int kernel);

}  // namespace mircorpus::features
