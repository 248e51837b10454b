#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mircorpus/error.hpp"
#include "mircorpus/signal/audio.hpp"
#include "mircorpus/signal/spectrum.hpp"
#include "mircorpus/signal/synth.hpp"
#include "test_support.hpp"

using namespace mircorpus;
using namespace mircorpus::signal;

namespace {

// Direct O(N^2) DFT of a Hann-windowed frame, independent of FFTW.
std::vector<double> dft_magnitudes(std::span<const double> x, std::size_t offset, int n)
{
    std::vector<double> mag(static_cast<std::size_t>(n / 2 + 1));
    for (int k = 0; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        for (int t = 0; t < n; ++t) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / n);
            const double v = x[offset + static_cast<std::size_t>(t)] * w;
            re += v * std::cos(2.0 * std::numbers::pi * k * t / n);
            im -= v * std::sin(2.0 * std::numbers::pi * k * t / n);
        }
        mag[static_cast<std::size_t>(k)] = std::hypot(re, im);
    }
    return mag;
}

ErrorCode code_of(const auto& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected mircorpus::Error");
    return ErrorCode::io;
}

}  // namespace

TEST_CASE("stft frame count follows the closed form")
{
    for (std::size_t len : {2048u, 2049u, 3071u, 3072u, 44100u, 100000u}) {
        AudioBuffer b;
        b.samples.assign(len, 0.1);
        const auto spec = stft(b);
        CHECK(spec.frames.size() == (len - 2048) / 1024 + 1);
        CHECK(spec.frames.size() == frame_count(len, 2048, 1024));
        CHECK(spec.frames.front().size() == 1025);
    }
    AudioBuffer two;
    two.samples.assign(2048, 0.0);
    CHECK(stft(two).frames.size() == 1);
}

TEST_CASE("stft of silence is zero and frame times follow the hop")
{
    AudioBuffer b;
    b.samples.assign(44100, 0.0);
    const auto spec = stft(b);
    for (const auto& f : spec.frames)
        for (double m : f)
            CHECK(m == 0.0);
    CHECK(spec.frame_times[3] == doctest::Approx(3 * 1024.0 / 44100.0));
    CHECK(44100.0 / spec.hop == doctest::Approx(43.066).epsilon(1e-4));
}

TEST_CASE("stft rejects short input and bad sizes")
{
    AudioBuffer b;
    b.samples.assign(2047, 0.0);
    CHECK(code_of([&] { stft(b); }) == ErrorCode::too_short);
    b.samples.assign(4096, 0.0);
    CHECK(code_of([&] { stft(b, 1000, 500); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { stft(b, 1024, 2048); }) == ErrorCode::invalid_argument);
}

TEST_CASE("1 kHz sine peaks at bin 46, matching a direct DFT")
{
    const auto tone = synth_tone(1000.0, 0.2, 1.0);
    const auto spec = stft(tone);
    const auto& frame = spec.frames[2];
    const auto peak = std::distance(frame.begin(), std::max_element(frame.begin(), frame.end()));
    CHECK(peak == 46);
    CHECK(peak == std::lround(1000.0 * 2048 / 44100));

    const auto oracle = dft_magnitudes(tone.samples, 2 * 1024, 2048);
    for (std::size_t k = 0; k < oracle.size(); ++k)
        CHECK(frame[k] == doctest::Approx(oracle[k]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("Parseval: one-sided spectral energy equals windowed frame energy")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 0.3);
    AudioBuffer b;
    for (int trial = 0; trial < 5; ++trial) {
        b.samples.resize(8192);
        for (double& s : b.samples)
            s = g(rng);
        const auto spec = stft(b);
        const auto w = hann_window(2048);
        for (std::size_t i = 0; i < spec.frames.size(); ++i) {
            double time_energy = 0.0;
            for (int n = 0; n < 2048; ++n) {
                const double v = b.samples[i * 1024 + static_cast<std::size_t>(n)] * w[static_cast<std::size_t>(n)];
                time_energy += v * v;
            }
            const auto& m = spec.frames[i];
            double spec_energy = m.front() * m.front() + m.back() * m.back();
            for (std::size_t k = 1; k + 1 < m.size(); ++k)
                spec_energy += 2.0 * m[k] * m[k];
            spec_energy /= 2048.0;
            CHECK(std::abs(spec_energy - time_energy) <= 0.01 * time_energy);
        }
    }
}

TEST_CASE("istft reconstructs the interior of the signal")
{
    const auto noise = synth_noise(0.5, 3);
    const auto spec = stft_complex(noise.samples, 2048, 1024);
    const auto back = istft(spec, noise.size());
    for (std::size_t n = 1024; n + 2048 < noise.size(); ++n)
        REQUIRE(back[n] == doctest::Approx(noise.samples[n]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("synth fixtures")
{
    const auto tone = synth_tone(440.0, 1.0, 0.5);
    CHECK(tone.size() == 44100);
    double peak = 0.0;
    for (double s : tone.samples)
        peak = std::max(peak, std::abs(s));
    CHECK(peak == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(44100.0 / 440.0 == doctest::Approx(100.23).epsilon(1e-4));

    const auto clicks = synth_clicks(0.5, 2.0);
    std::vector<std::size_t> at;
    for (std::size_t n = 0; n < clicks.size(); ++n)
        if (clicks.samples[n] != 0.0) {
            CHECK(clicks.samples[n] == 1.0);
            at.push_back(n);
        }
    CHECK(at == std::vector<std::size_t>{0, 22050, 44100, 66150});

    CHECK(synth_noise(1.0, 7).samples == synth_noise(1.0, 7).samples);
    CHECK(synth_noise(1.0, 7).samples != synth_noise(1.0, 8).samples);

    const std::vector<int> triad{60, 64, 67};
    const auto chord = synth_chord(triad, 0.5);
    double cpeak = 0.0;
    for (double s : chord.samples)
        cpeak = std::max(cpeak, std::abs(s));
    CHECK(cpeak == doctest::Approx(0.9));
    CHECK(synth_chord(triad, 0.5).samples == chord.samples);
}

TEST_CASE("synth argument errors")
{
    CHECK(code_of([] { synth_tone(440.0, 0.0, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { synth_tone(22050.0, 1.0, 1.0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { synth_noise(-1.0, 1); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { synth_chord(std::vector<int>{}, 1.0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("add_noise hits the requested SNR")
{
    const auto tone = synth_tone(440.0, 1.0, 0.5);
    const auto noisy = add_noise(tone, 20.0, 5);
    double ps = 0.0, pn = 0.0;
    for (std::size_t n = 0; n < tone.size(); ++n) {
        ps += tone.samples[n] * tone.samples[n];
        const double d = noisy.samples[n] - tone.samples[n];
        pn += d * d;
    }
    CHECK(10.0 * std::log10(ps / pn) == doctest::Approx(20.0).epsilon(0.01));
}

TEST_CASE("WAV: 16-bit mono round trip within one quantisation step")
{
    const auto dir = scratch_dir("wav_rt");
    const std::vector<AudioBuffer> fixtures{synth_tone(440.0, 1.0, 0.5), synth_noise(0.3, 2),
                                            synth_clicks(0.25, 1.0),
                                            synth_chord(std::vector<int>{57, 60, 64}, 0.4)};
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto path = dir / ("f" + std::to_string(i) + ".wav");
        write_wav(path, fixtures[i]);
        const auto back = load_audio(path);
        REQUIRE(back.size() == fixtures[i].size());
        CHECK(back.sample_rate == 44100);
        for (std::size_t n = 0; n < back.size(); ++n)
            REQUIRE(std::abs(back.samples[n] - fixtures[i].samples[n]) <= std::ldexp(1.0, -15));
    }
    CHECK(load_audio(dir / "f0.wav").size() == 44100);
}

TEST_CASE("WAV: stereo is mixed by channel mean; 24-bit and float decode")
{
    const auto dir = scratch_dir("wav_fmt");
    WavData stereo;
    stereo.channels = {std::vector<double>(1000, 0.5), std::vector<double>(1000, -0.5)};
    write_wav(dir / "st.wav", stereo);
    const auto mono = load_audio(dir / "st.wav");
    REQUIRE(mono.size() == 1000);
    for (double s : mono.samples)
        CHECK(s == 0.0);

    WavData one;
    one.channels = {std::vector<double>{0.25, -0.75, 0.999, -1.0}};
    write_wav(dir / "p24.wav", one, SampleFormat::pcm24);
    write_wav(dir / "f32.wav", one, SampleFormat::float32);
    const auto a = read_wav(dir / "p24.wav");
    const auto b = read_wav(dir / "f32.wav");
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(a.channels[0][n] == doctest::Approx(one.channels[0][n]).epsilon(1e-6));
        CHECK(b.channels[0][n] == doctest::Approx(one.channels[0][n]).epsilon(1e-7));
    }
}

TEST_CASE("WAV: malformed, truncated, unsupported and unreadable files are diagnosed")
{
    const auto dir = scratch_dir("wav_err");
    {
        std::ofstream(dir / "riff.wav", std::ios::binary) << "RIFF";
    }
    CHECK(code_of([&] { load_audio(dir / "riff.wav"); }) == ErrorCode::malformed_header);
    try {
        load_audio(dir / "riff.wav");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("riff.wav") != std::string::npos);
    }

    CHECK(code_of([&] { load_audio(dir / "missing.wav"); }) == ErrorCode::io);

    // Valid header announcing IMA ADPCM (format tag 0x11).
    write_wav(dir / "ok.wav", synth_tone(440.0, 0.01, 0.5));
    std::vector<char> bytes;
    {
        std::ifstream in(dir / "ok.wav", std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto adpcm = bytes;
    adpcm[20] = 0x11;
    std::ofstream(dir / "adpcm.wav", std::ios::binary).write(adpcm.data(), static_cast<std::streamsize>(adpcm.size()));
    CHECK(code_of([&] { load_audio(dir / "adpcm.wav"); }) == ErrorCode::unsupported_encoding);

    auto truncated = bytes;
    truncated.resize(100);
    std::ofstream(dir / "trunc.wav", std::ios::binary).write(truncated.data(), 100);
    CHECK(code_of([&] { load_audio(dir / "trunc.wav"); }) == ErrorCode::malformed_header);
}

TEST_CASE("resampling to 44.1 kHz preserves duration and a tone's frequency")
{
    const auto dir = scratch_dir("wav_rs");
    for (int rate : {22050, 48000, 32000, 96000}) {
        const double seconds = 0.75;
        const auto n = static_cast<std::size_t>(seconds * rate);
        WavData w;
        w.sample_rate = rate;
        w.channels.assign(1, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            w.channels[0][i] = 0.5 * std::sin(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(i) / rate);
        write_wav(dir / "r.wav", w, SampleFormat::float32);
        const auto b = load_audio(dir / "r.wav");
        CHECK(std::abs(b.duration() - static_cast<double>(n) / rate) <= 1.0 / 44100.0);
        const auto spec = stft(b);
        const auto& f = spec.frames[spec.frames.size() / 2];
        CHECK(std::distance(f.begin(), std::max_element(f.begin(), f.end())) == 46);
        // interior amplitude preserved
        double peak = 0.0;
        for (std::size_t i = 4000; i + 4000 < b.size(); ++i)
            peak = std::max(peak, std::abs(b.samples[i]));
        CHECK(peak == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("aligned long-window stft shares canonical frame centres")
{
    AudioBuffer b;
    b.samples.assign(3 * 44100, 0.0);
    b.samples[20 * 1024 + 1024] = 1.0;  // impulse at the centre of canonical frame 20
    const auto canonical = stft(b);
    const auto wide = stft_aligned(b, 8192);
    REQUIRE(wide.frames.size() == canonical.frames.size());
    CHECK(wide.frames.front().size() == 4097);
    CHECK(wide.fft_size == 8192);
    // the impulse sits at the window peak only in frame 20
    double best = 0.0;
    std::size_t best_frame = 0;
    for (std::size_t i = 0; i < wide.frames.size(); ++i)
        if (wide.frames[i][0] > best) {
            best = wide.frames[i][0];
            best_frame = i;
        }
    CHECK(best_frame == 20);
    CHECK(best == doctest::Approx(1.0));
    CHECK(code_of([&] { stft_aligned(b, 1024); }) == ErrorCode::invalid_argument);
}
