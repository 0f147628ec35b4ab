#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "procgen/colorspace.hpp"
#include "procgen/image.hpp"

namespace procgen {

// Minimal 8-bit RGB PNG writer over zlib. Fixed compression settings keep
// the byte stream deterministic for identical pixels. Linear values get
// sRGB-encoded here and nowhere else.

namespace pngdetail {

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

inline void put_chunk(std::string& out, const char type[4], const std::string& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    std::string body(type, 4);
    body += payload;
    out += body;
    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size())));
    put_u32(out, crc);
}

}  // namespace pngdetail

inline std::string png_to_string(const Image& img, bool srgb_encode = true) {
    const int w = img.width, h = img.height;
    // Filter byte 0 per scanline; PNG rows run top-down while Image rows run
    // bottom-up.
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<std::size_t>(h) * (1 + static_cast<std::size_t>(w) * 3));
    for (int row = h - 1; row >= 0; --row) {
        raw.push_back(0);
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                const double v = img.at(x, row, img.channels == 3 ? c : 0);
                const double e = srgb_encode ? linear_to_srgb(v) : clamp01(v);
                raw.push_back(static_cast<unsigned char>(e * 255.0 + 0.5));
            }
    }

    uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> compressed(compressed_size);
    if (compress2(compressed.data(), &compressed_size, raw.data(),
                  static_cast<uLong>(raw.size()), 6) != Z_OK)
        raise(errc::malformed_file, "zlib compression failed");

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    pngdetail::put_u32(ihdr, static_cast<std::uint32_t>(w));
    pngdetail::put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // color type RGB
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // interlace
    pngdetail::put_chunk(out, "IHDR", ihdr);
    pngdetail::put_chunk(
        out, "IDAT",
        std::string(reinterpret_cast<const char*>(compressed.data()), compressed_size));
    pngdetail::put_chunk(out, "IEND", "");
    return out;
}

inline void write_png(const std::string& path, const Image& img, bool srgb_encode = true) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::malformed_file, "cannot open '" + path + "' for writing");
    const std::string data = png_to_string(img, srgb_encode);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace procgen
