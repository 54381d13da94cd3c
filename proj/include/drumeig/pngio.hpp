#pragma once

// Minimal PNG writer (8-bit RGB, zlib-compressed) for rendering mode grids.

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace drumeig {

namespace detail {

inline void png_append_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(static_cast<std::uint8_t>((x >> 24) & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 16) & 0xff));
    v.push_back(static_cast<std::uint8_t>((x >> 8) & 0xff));
    v.push_back(static_cast<std::uint8_t>(x & 0xff));
}

inline void png_chunk(std::vector<std::uint8_t>& out, const char type[4],
                      const std::vector<std::uint8_t>& data) {
    png_append_u32(out, static_cast<std::uint32_t>(data.size()));
    std::vector<std::uint8_t> body;
    body.insert(body.end(), type, type + 4);
    body.insert(body.end(), data.begin(), data.end());
    out.insert(out.end(), body.begin(), body.end());
    const auto crc = crc32(0L, body.data(), static_cast<uInt>(body.size()));
    png_append_u32(out, static_cast<std::uint32_t>(crc));
}

} // namespace detail

// rgb: row-major, 3 bytes per pixel, rows top to bottom.
inline void write_png_rgb(const std::string& path, int width, int height,
                          const std::vector<std::uint8_t>& rgb) {
    if (static_cast<std::size_t>(width) * height * 3 != rgb.size())
        throw std::invalid_argument("write_png_rgb: buffer size mismatch");
    std::vector<std::uint8_t> raw;
    raw.reserve(rgb.size() + static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0); // filter type: none
        const std::size_t row = static_cast<std::size_t>(y) * width * 3;
        raw.insert(raw.end(), rgb.begin() + row, rgb.begin() + row + static_cast<std::size_t>(width) * 3);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw std::runtime_error("write_png_rgb: zlib compression failed");
    compressed.resize(bound);

    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    std::vector<std::uint8_t> ihdr;
    detail::png_append_u32(ihdr, static_cast<std::uint32_t>(width));
    detail::png_append_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(2); // color type: truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    detail::png_chunk(out, "IHDR", ihdr);
    detail::png_chunk(out, "IDAT", compressed);
    detail::png_chunk(out, "IEND", {});

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_png_rgb: cannot open " + path);
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (written != out.size()) throw std::runtime_error("write_png_rgb: short write to " + path);
}

} // namespace drumeig
