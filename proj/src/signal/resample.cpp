#include <cmath>
#include <numbers>

#include "mircorpus/error.hpp"
#include "mircorpus/signal/audio.hpp"

namespace mircorpus::signal {

namespace {

constexpr double kKaiserBeta = 8.0;
constexpr int kZeroCrossings = 32;

double sinc(double x)
{
    if (std::abs(x) < 1e-12)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace

std::vector<double> resample(std::span<const double> input, int from_rate, int to_rate)
{
    if (from_rate <= 0 || to_rate <= 0)
        throw Error(ErrorCode::invalid_argument, "resample: sample rates must be positive");
    if (from_rate == to_rate)
        return {input.begin(), input.end()};

    const double ratio = static_cast<double>(to_rate) / from_rate;
    // Cutoff relative to the input Nyquist; pull it in slightly when decimating.
    const double cutoff = ratio < 1.0 ? 0.95 * ratio : 1.0;
    const double half_width = kZeroCrossings / cutoff;
    const double norm = 1.0 / std::cyl_bessel_i(0.0, kKaiserBeta);

    const auto n_out = static_cast<std::size_t>(std::llround(input.size() * ratio));
    const auto n_in = static_cast<long long>(input.size());
    std::vector<double> out(n_out, 0.0);

    for (std::size_t n = 0; n < n_out; ++n) {
        const double x = static_cast<double>(n) / ratio;
        const auto first = static_cast<long long>(std::ceil(x - half_width));
        const auto last = static_cast<long long>(std::floor(x + half_width));
        double acc = 0.0;
        for (long long k = std::max(first, 0LL); k <= std::min(last, n_in - 1); ++k) {
            const double d = x - static_cast<double>(k);
            const double u = d / half_width;
            if (u <= -1.0 || u >= 1.0)
                continue;
            const double window = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) * norm;
            acc += input[static_cast<std::size_t>(k)] * cutoff * sinc(cutoff * d) * window;
        }
        out[n] = acc;
    }
    return out;
}

}  // namespace mircorpus::signal
