#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mircorpus/signal/audio.hpp"

// Deterministic test signals. All durations are seconds, rendered at 44.1 kHz
// with round(duration * 44100) samples.
namespace mircorpus::signal {

AudioBuffer synth_tone(double freq, double duration, double amplitude);

/// Uniform white noise with peak amplitude `amplitude`, fully determined by seed.
AudioBuffer synth_noise(double duration, std::uint64_t seed, double amplitude = 0.5);

/// Unit impulses at t = 0, period, 2*period, ...
AudioBuffer synth_clicks(double period, double duration);

/// Sum of harmonically rich tones (fundamental + 3 overtones at 1/h amplitude)
/// for each MIDI pitch, peak-normalised to 0.9.
AudioBuffer synth_chord(std::span<const int> midi_pitches, double duration);

double midi_to_hz(double midi);

/// Sample-wise sum, length of the longest input; no normalisation.
AudioBuffer mix(std::span<const AudioBuffer> parts);
AudioBuffer concatenate(std::span<const AudioBuffer> parts);
AudioBuffer scaled(const AudioBuffer& buffer, double gain);

/// Adds seeded white noise so that signal power / noise power = 10^(snr_db/10),
/// then clamps to [-1, 1].
AudioBuffer add_noise(const AudioBuffer& buffer, double snr_db, std::uint64_t seed);

/// Peak-normalises to `peak` (no-op for silence).
AudioBuffer normalized(const AudioBuffer& buffer, double peak);

}  // namespace mircorpus::signal
