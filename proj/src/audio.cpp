#include "twinfuse/audio.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "twinfuse/errors.hpp"
#include "bytes.hpp"

namespace twinfuse {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

bool tag_is(const std::uint8_t* p, const char* tag) {
    return std::memcmp(p, tag, 4) == 0;
}

} // namespace

AudioClip load_wav(const std::filesystem::path& path) {
    const auto data = read_file(path);
    if (data.size() < 12 || !tag_is(data.data(), "RIFF") || !tag_is(data.data() + 8, "WAVE"))
        throw NotWav(path.string() + ": not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint32_t sample_rate = 0;
    std::size_t data_off = 0, data_len = 0;
    bool have_data = false;

    std::size_t off = 12;
    while (off < data.size()) {
        if (off + 8 > data.size())
            throw Truncated(path.string() + ": chunk header past end of file");
        const std::uint8_t* hdr = data.data() + off;
        const std::uint32_t size = bytes::get_u32(hdr + 4);
        const std::size_t body = off + 8;
        if (tag_is(hdr, "fmt ")) {
            if (size < 16 || body + 16 > data.size())
                throw Truncated(path.string() + ": fmt chunk too small");
            const std::uint16_t format = bytes::get_u16(&data[body]);
            const std::uint16_t channels = bytes::get_u16(&data[body + 2]);
            sample_rate = bytes::get_u32(&data[body + 4]);
            const std::uint16_t bits = bytes::get_u16(&data[body + 14]);
            if (format != 1)
                throw UnsupportedFormat(path.string() + ": only PCM (format 1) is supported");
            if (channels != 1)
                throw UnsupportedFormat(path.string() + ": only mono is supported, got " +
                                        std::to_string(channels) + " channels");
            if (bits != 16)
                throw UnsupportedFormat(path.string() + ": only 16-bit samples are supported");
            if (sample_rate == 0) throw UnsupportedFormat(path.string() + ": zero sample rate");
            have_fmt = true;
        } else if (tag_is(hdr, "data")) {
            if (body + size > data.size())
                throw Truncated(path.string() + ": data chunk shorter than declared");
            data_off = body;
            data_len = size;
            have_data = true;
        }
        off = body + size + (size & 1);  // chunks are word-aligned
    }

    if (!have_fmt) throw UnsupportedFormat(path.string() + ": missing fmt chunk");
    if (!have_data) throw Truncated(path.string() + ": missing data chunk");
    if (data_len < 2) throw Truncated(path.string() + ": empty data chunk");

    const std::size_t n = data_len / 2;
    AudioClip clip;
    clip.sample_rate = static_cast<int>(sample_rate);
    clip.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto raw = static_cast<std::int16_t>(bytes::get_u16(&data[data_off + 2 * i]));
        clip.samples[static_cast<Eigen::Index>(i)] = raw / 32768.0;
    }
    return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
    if (clip.sample_rate <= 0 || clip.samples.size() == 0)
        throw InvalidArgument("write_wav: clip must have a positive rate and samples");

    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_size = 2 * n;
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);

    auto put_tag = [&](const char* tag) { out.insert(out.end(), tag, tag + 4); };
    put_tag("RIFF");
    bytes::put_u32(out, 36 + data_size);
    put_tag("WAVE");
    put_tag("fmt ");
    bytes::put_u32(out, 16);
    bytes::put_u16(out, 1);  // PCM
    bytes::put_u16(out, 1);  // mono
    bytes::put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
    bytes::put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
    bytes::put_u16(out, 2);   // block align
    bytes::put_u16(out, 16);  // bits per sample
    put_tag("data");
    bytes::put_u32(out, data_size);

    for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
        long long v = std::llround(clip.samples[i] * 32768.0);
        v = std::clamp(v, -32768ll, 32767ll);
        bytes::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!os) throw IoError("short write to " + path.string());
}

} // namespace twinfuse
