#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "procgen/image.hpp"

namespace procgen {

// Portable float map. Header "Pf" (grayscale) or "PF" (color), dimensions,
// scale -1.0 (little-endian), rows bottom-up -- which matches Image's row 0
// at v = 0. Values are float32; inf round-trips natively.

inline std::string pfm_to_string(const Image& img) {
    if (img.channels != 1 && img.channels != 3)
        raise(errc::kind_mismatch, "PFM supports 1 or 3 channels");
    std::ostringstream os(std::ios::binary);
    os << (img.channels == 1 ? "Pf" : "PF") << "\n"
       << img.width << " " << img.height << "\n-1.0\n";
    for (double v : img.data) {
        const float f = static_cast<float>(v);
        char bytes[4];
        std::memcpy(bytes, &f, 4);
        os.write(bytes, 4);
    }
    return os.str();
}

inline void write_pfm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::malformed_file, "cannot open '" + path + "' for writing");
    const std::string data = pfm_to_string(img);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline Image pfm_from_string(const std::string& data) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        if (start == pos)
            raise(errc::malformed_file,
                  "PFM truncated header at byte " + std::to_string(start));
        return data.substr(start, pos - start);
    };

    const std::string magic = token();
    int channels = 0;
    if (magic == "Pf") channels = 1;
    else if (magic == "PF") channels = 3;
    else raise(errc::malformed_file, "PFM bad magic at byte 0");

    int width = 0, height = 0;
    double scale = 0.0;
    try {
        width = std::stoi(token());
        height = std::stoi(token());
        scale = std::stod(token());
    } catch (const std::exception&) {
        raise(errc::malformed_file, "PFM bad header at byte " + std::to_string(pos));
    }
    if (width <= 0 || height <= 0) raise(errc::malformed_file, "PFM bad dimensions");
    if (scale >= 0.0) raise(errc::malformed_file, "PFM big-endian data unsupported");
    pos += 1;  // single whitespace after the scale

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                              static_cast<std::size_t>(channels);
    if (data.size() - pos < count * 4)
        raise(errc::malformed_file,
              "PFM truncated payload at byte " + std::to_string(data.size()));

    Image img(width, height, channels);
    for (std::size_t i = 0; i < count; ++i) {
        float f;
        std::memcpy(&f, data.data() + pos + i * 4, 4);
        img.data[i] = static_cast<double>(f);
    }
    return img;
}

inline Image read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::malformed_file, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return pfm_from_string(ss.str());
}

}  // namespace procgen
