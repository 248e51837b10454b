#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "mircorpus/error.hpp"
#include "mircorpus/signal/audio.hpp"

namespace mircorpus::signal {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p)
{
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v)
{
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag)
{
    out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void fail(ErrorCode code, const std::filesystem::path& path, const std::string& what)
{
    throw Error(code, path.string() + ": " + what);
}

struct Format {
    std::uint16_t tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

Format parse_format(const unsigned char* p, std::uint32_t size, const std::filesystem::path& path)
{
    if (size < 16)
        fail(ErrorCode::malformed_header, path, "fmt chunk too small");
    Format fmt;
    fmt.tag = read_u16(p);
    fmt.channels = read_u16(p + 2);
    fmt.sample_rate = read_u32(p + 4);
    fmt.block_align = read_u16(p + 12);
    fmt.bits = read_u16(p + 14);
    if (fmt.tag == kFormatExtensible) {
        if (size < 40)
            fail(ErrorCode::malformed_header, path, "extensible fmt chunk too small");
        // first two bytes of the sub-format GUID carry the actual format tag
        fmt.tag = read_u16(p + 24);
    }
    if (fmt.channels == 0 || fmt.sample_rate == 0)
        fail(ErrorCode::malformed_header, path, "zero channels or sample rate");

    const bool int_ok = fmt.tag == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24);
    const bool float_ok = fmt.tag == kFormatFloat && fmt.bits == 32;
    if (!int_ok && !float_ok)
        fail(ErrorCode::unsupported_encoding, path,
             "unsupported sample encoding (format tag " + std::to_string(fmt.tag) + ", " +
                 std::to_string(fmt.bits) + " bits)");
    if (fmt.block_align != fmt.channels * (fmt.bits / 8))
        fail(ErrorCode::malformed_header, path, "block alignment does not match format");
    return fmt;
}

double decode_sample(const unsigned char* p, const Format& fmt)
{
    if (fmt.tag == kFormatFloat) {
        float f;
        std::uint32_t bits = read_u32(p);
        std::memcpy(&f, &bits, sizeof f);
        return static_cast<double>(f);
    }
    if (fmt.bits == 16)
        return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
    if (v & 0x800000)
        v -= 0x1000000;
    return v / 8388608.0;
}

}  // namespace

WavData read_wav(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::io, path, "cannot open file");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad())
        fail(ErrorCode::io, path, "read error");

    if (bytes.size() < 12)
        fail(ErrorCode::malformed_header, path, "truncated RIFF header");
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        fail(ErrorCode::malformed_header, path, "not a RIFF/WAVE file");

    std::optional<Format> fmt;
    const unsigned char* data = nullptr;
    std::uint32_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::uint32_t size = read_u32(chunk + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (body + size > bytes.size())
                fail(ErrorCode::malformed_header, path, "truncated fmt chunk");
            fmt = parse_format(bytes.data() + body, size, path);
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (body + size > bytes.size())
                fail(ErrorCode::malformed_header, path, "truncated data chunk");
            data = bytes.data() + body;
            data_size = size;
            break;
        }
        pos = body + size + (size & 1u);
    }
    if (!fmt)
        fail(ErrorCode::malformed_header, path, "missing fmt chunk");
    if (!data)
        fail(ErrorCode::malformed_header, path, "missing data chunk");

    WavData out;
    out.sample_rate = static_cast<int>(fmt->sample_rate);
    const std::size_t frames = data_size / fmt->block_align;
    const std::size_t width = fmt->bits / 8;
    out.channels.assign(fmt->channels, std::vector<double>(frames));
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t c = 0; c < fmt->channels; ++c)
            out.channels[c][i] = decode_sample(data + i * fmt->block_align + c * width, *fmt);
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const WavData& data, SampleFormat format)
{
    if (data.channels.empty())
        throw Error(ErrorCode::invalid_argument, path.string() + ": no channels to write");
    const std::size_t frames = data.channels.front().size();
    for (const auto& ch : data.channels)
        if (ch.size() != frames)
            throw Error(ErrorCode::length_mismatch, path.string() + ": channel lengths differ");

    const std::uint16_t bits = format == SampleFormat::pcm16 ? 16 : format == SampleFormat::pcm24 ? 24 : 32;
    const std::uint16_t tag = format == SampleFormat::float32 ? kFormatFloat : kFormatPcm;
    const auto channels = static_cast<std::uint16_t>(data.channels.size());
    const std::uint16_t block = channels * (bits / 8);
    const auto data_bytes = static_cast<std::uint32_t>(frames * block);

    std::vector<unsigned char> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, tag);
    put_u16(out, channels);
    put_u32(out, static_cast<std::uint32_t>(data.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(data.sample_rate) * block);
    put_u16(out, block);
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_bytes);

    for (std::size_t i = 0; i < frames; ++i) {
        for (const auto& ch : data.channels) {
            const double x = std::clamp(ch[i], -1.0, 1.0);
            switch (format) {
            case SampleFormat::pcm16: {
                const long q = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
                put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
                break;
            }
            case SampleFormat::pcm24: {
                const long q = std::clamp(std::lround(x * 8388608.0), -8388608L, 8388607L);
                const auto u = static_cast<std::uint32_t>(q) & 0xFFFFFFu;
                out.push_back(static_cast<unsigned char>(u & 0xFF));
                out.push_back(static_cast<unsigned char>((u >> 8) & 0xFF));
                out.push_back(static_cast<unsigned char>((u >> 16) & 0xFF));
                break;
            }
            case SampleFormat::float32: {
                const auto f = static_cast<float>(x);
                std::uint32_t u;
                std::memcpy(&u, &f, sizeof u);
                put_u32(out, u);
                break;
            }
            }
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw Error(ErrorCode::io, path.string() + ": cannot open for writing");
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file)
        throw Error(ErrorCode::io, path.string() + ": write failed");
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer, SampleFormat format)
{
    WavData data;
    data.sample_rate = buffer.sample_rate;
    data.channels.push_back(buffer.samples);
    write_wav(path, data, format);
}

AudioBuffer load_audio(const std::filesystem::path& path)
{
    WavData wav = read_wav(path);
    const std::size_t frames = wav.channels.front().size();
    std::vector<double> mono(frames, 0.0);
    const double scale = 1.0 / static_cast<double>(wav.channels.size());
    for (std::size_t i = 0; i < frames; ++i) {
        double sum = 0.0;
        for (const auto& ch : wav.channels)
            sum += ch[i];
        mono[i] = sum * scale;
    }

    AudioBuffer buffer;
    buffer.sample_rate = kSampleRate;
    buffer.samples = wav.sample_rate == kSampleRate
                         ? std::move(mono)
                         : resample(mono, wav.sample_rate, kSampleRate);
    for (double& s : buffer.samples)
        s = std::clamp(s, -1.0, 1.0);
    return buffer;
}

}  // namespace mircorpus::signal
