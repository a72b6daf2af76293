#pragma once

// PNG and BMP reading/writing for 8-bit images.
//
// Input may carry 3 or 4 channels (grayscale PNGs are expanded); a fourth
// channel is dropped, never composited. Output is always 3-channel.

#include <png.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "cvd/color_core.hpp"
#include "cvd/error.hpp"

namespace cvd {

enum class ImageFormat { PNG, BMP };

namespace detail {

inline std::uint32_t read_le32(std::span<const std::uint8_t> b, std::size_t off) {
    return std::uint32_t{b[off]} | std::uint32_t{b[off + 1]} << 8 | std::uint32_t{b[off + 2]} << 16 |
           std::uint32_t{b[off + 3]} << 24;
}

inline std::uint16_t read_le16(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

inline void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_le16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

/// Shift and width of the lowest set run of bits in `mask`.
inline std::pair<int, int> mask_shift(std::uint32_t mask) {
    if (mask == 0) return {0, 0};
    int shift = 0;
    while (((mask >> shift) & 1u) == 0) ++shift;
    int bits = 0;
    while (shift + bits < 32 && ((mask >> (shift + bits)) & 1u) != 0) ++bits;
    return {shift, bits};
}

inline std::uint8_t extract_channel(std::uint32_t px, std::uint32_t mask) {
    const auto [shift, bits] = mask_shift(mask);
    if (bits == 0) return 0;
    const std::uint32_t v = (px & mask) >> shift;
    if (bits == 8) return static_cast<std::uint8_t>(v);
    const std::uint32_t maxv = (bits >= 32) ? 0xFFFFFFFFu : ((1u << bits) - 1u);
    return static_cast<std::uint8_t>((v * 255u + maxv / 2) / maxv);
}

inline Image8 decode_bmp(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 54 || bytes[0] != 'B' || bytes[1] != 'M') throw IoError("not a BMP file");
    const std::uint32_t pixel_offset = read_le32(bytes, 10);
    const std::uint32_t header_size = read_le32(bytes, 14);
    if (header_size < 40) throw IoError("unsupported BMP header (OS/2 core headers are not supported)");
    const auto width = static_cast<std::int32_t>(read_le32(bytes, 18));
    const auto raw_height = static_cast<std::int32_t>(read_le32(bytes, 22));
    const std::uint16_t bpp = read_le16(bytes, 28);
    const std::uint32_t compression = read_le32(bytes, 30);
    if (width <= 0 || raw_height == 0) throw IoError("BMP has invalid dimensions");
    if (bpp != 24 && bpp != 32) throw IoError("only 24- and 32-bit BMP files are supported");

    std::uint32_t rmask = 0x00FF0000u, gmask = 0x0000FF00u, bmask = 0x000000FFu;
    if (compression == 3 || compression == 6) {
        if (bpp != 32) throw IoError("bitfield BMP must be 32-bit");
        if (bytes.size() < 14 + 40 + 12) throw IoError("truncated BMP bitfields");
        rmask = read_le32(bytes, 54);
        gmask = read_le32(bytes, 58);
        bmask = read_le32(bytes, 62);
    } else if (compression != 0) {
        throw IoError("compressed BMP files are not supported");
    }

    const bool top_down = raw_height < 0;
    const std::size_t w = static_cast<std::size_t>(width);
    const std::size_t h = static_cast<std::size_t>(top_down ? -static_cast<std::int64_t>(raw_height) : raw_height);
    const std::size_t bytes_pp = bpp / 8;
    const std::size_t stride = (w * bytes_pp + 3) & ~std::size_t{3};
    if (pixel_offset + stride * h > bytes.size()) throw IoError("truncated BMP pixel data");

    Image8 img(w, h);
    for (std::size_t row = 0; row < h; ++row) {
        const std::size_t y = top_down ? row : h - 1 - row;
        const std::size_t base = pixel_offset + row * stride;
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t p = base + x * bytes_pp;
            if (bpp == 24) {
                img.at(x, y, 0) = bytes[p + 2];
                img.at(x, y, 1) = bytes[p + 1];
                img.at(x, y, 2) = bytes[p];
            } else {
                const std::uint32_t px = read_le32(bytes, p);
                img.at(x, y, 0) = extract_channel(px, rmask);
                img.at(x, y, 1) = extract_channel(px, gmask);
                img.at(x, y, 2) = extract_channel(px, bmask);
            }
        }
    }
    return img;
}

inline Image8 decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw IoError(std::string("PNG decode failed: ") + image.message);
    }
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("PNG decode failed: " + msg);
    }
    const std::size_t w = image.width;
    const std::size_t h = image.height;
    std::vector<std::uint8_t> rgb(w * h * 3);
    for (std::size_t i = 0; i < w * h; ++i) {
        rgb[i * 3] = rgba[i * 4];
        rgb[i * 3 + 1] = rgba[i * 4 + 1];
        rgb[i * 3 + 2] = rgba[i * 4 + 2];
    }
    return Image8(w, h, std::move(rgb));
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_png(const Image8& img) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0, nullptr)) {
        throw IoError(std::string("PNG encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

/// Uncompressed 24-bit bottom-up BMP.
inline std::vector<std::uint8_t> encode_bmp(const Image8& img) {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const std::size_t stride = (w * 3 + 3) & ~std::size_t{3};
    const auto data_size = static_cast<std::uint32_t>(stride * h);
    std::vector<std::uint8_t> out;
    out.reserve(54 + data_size);
    out.push_back('B');
    out.push_back('M');
    detail::put_le32(out, 54 + data_size);
    detail::put_le32(out, 0);
    detail::put_le32(out, 54);
    detail::put_le32(out, 40);
    detail::put_le32(out, static_cast<std::uint32_t>(w));
    detail::put_le32(out, static_cast<std::uint32_t>(h));
    detail::put_le16(out, 1);
    detail::put_le16(out, 24);
    detail::put_le32(out, 0);
    detail::put_le32(out, data_size);
    detail::put_le32(out, 2835);  // 72 dpi
    detail::put_le32(out, 2835);
    detail::put_le32(out, 0);
    detail::put_le32(out, 0);
    for (std::size_t row = 0; row < h; ++row) {
        const std::size_t y = h - 1 - row;
        for (std::size_t x = 0; x < w; ++x) {
            out.push_back(img.at(x, y, 2));
            out.push_back(img.at(x, y, 1));
            out.push_back(img.at(x, y, 0));
        }
        for (std::size_t pad = w * 3; pad < stride; ++pad) out.push_back(0);
    }
    return out;
}

/// Sniffs the format from the leading bytes.
inline Image8 decode_image(std::span<const std::uint8_t> bytes) {
    static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngMagic)) return detail::decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return detail::decode_bmp(bytes);
    throw IoError("unrecognized image format (expected PNG or BMP)");
}

inline std::vector<std::uint8_t> encode_image(const Image8& img, ImageFormat fmt) {
    return fmt == ImageFormat::PNG ? encode_png(img) : encode_bmp(img);
}

/// Format implied by a file extension; PNG when not ".bmp".
inline ImageFormat format_for_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".bmp" ? ImageFormat::BMP : ImageFormat::PNG;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

inline Image8 read_image(const std::filesystem::path& path) {
    try {
        return decode_image(read_file_bytes(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

inline void write_image(const std::filesystem::path& path, const Image8& img) {
    write_file_bytes(path, encode_image(img, format_for_path(path)));
}

}  // namespace cvd
