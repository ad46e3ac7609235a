#include "cascade/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace cascade {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v & 0xFF), static_cast<unsigned char>((v >> 8) & 0xFF),
        static_cast<unsigned char>((v >> 16) & 0xFF),
        static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_u16(std::ofstream& out, std::uint16_t v) {
    const unsigned char bytes[2] = {static_cast<unsigned char>(v & 0xFF),
                                    static_cast<unsigned char>((v >> 8) & 0xFF)};
    out.write(reinterpret_cast<const char*>(bytes), 2);
}

}  // namespace

AudioClip read_wav(const std::string& path, const std::string& clip_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInputError("cannot open WAV file '" + path + "'");
    }
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
        throw InvalidInputError("'" + path + "' is not a RIFF/WAVE file");
    }

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    const unsigned char* sample_data = nullptr;
    std::uint32_t sample_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const char* chunk_id = reinterpret_cast<const char*>(data.data() + pos);
        const std::uint32_t chunk_size = read_u32(data.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_size > data.size()) {
            throw InvalidInputError("'" + path + "': truncated chunk");
        }
        if (std::memcmp(chunk_id, "fmt ", 4) == 0 && chunk_size >= 16) {
            format = read_u16(data.data() + body);
            channels = read_u16(data.data() + body + 2);
            sample_rate = read_u32(data.data() + body + 4);
            bits = read_u16(data.data() + body + 14);
        } else if (std::memcmp(chunk_id, "data", 4) == 0) {
            sample_data = data.data() + body;
            sample_bytes = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (sample_data == nullptr || sample_rate == 0) {
        throw InvalidInputError("'" + path + "': missing fmt or data chunk");
    }
    if (channels != 1) {
        throw InvalidInputError("'" + path + "': only mono WAV is supported");
    }

    std::vector<float> samples;
    if (format == 1 && bits == 16) {
        samples.reserve(sample_bytes / 2);
        for (std::uint32_t i = 0; i + 1 < sample_bytes; i += 2) {
            const auto raw = static_cast<std::int16_t>(read_u16(sample_data + i));
            samples.push_back(static_cast<float>(raw) / 32768.0f);
        }
    } else if (format == 3 && bits == 32) {
        samples.reserve(sample_bytes / 4);
        for (std::uint32_t i = 0; i + 3 < sample_bytes; i += 4) {
            float v = 0.0f;
            std::uint32_t bits32 = read_u32(sample_data + i);
            std::memcpy(&v, &bits32, 4);
            samples.push_back(v);
        }
    } else {
        throw InvalidInputError("'" + path + "': only PCM16 or float32 WAV is supported");
    }

    return make_clip(clip_id, std::move(samples), static_cast<int>(sample_rate));
}

void write_wav(const std::string& path, const AudioClip& clip) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInputError("cannot create WAV file '" + path + "'");
    }
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    out.write("RIFF", 4);
    write_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
    write_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, data_bytes);
    for (float v : clip.samples) {
        const float clamped = std::clamp(v, -1.0f, 1.0f);
        const auto raw = static_cast<std::int16_t>(std::lround(clamped * 32767.0f));
        write_u16(out, static_cast<std::uint16_t>(raw));
    }
}

}  // namespace cascade
