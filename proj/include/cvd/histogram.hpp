#pragma once

// Per-channel histograms and plain CDF histogram equalization:
// s(v) = round(255 * CDF(v)), half-up, no cdf-min renormalization.
// A constant plane therefore maps to all-255.

#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "cvd/color_core.hpp"
#include "cvd/error.hpp"

namespace cvd {

struct ChannelHistogram {
    std::array<std::uint64_t, 256> bins{};

    [[nodiscard]] std::uint64_t total() const {
        return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
    }
};

inline ChannelHistogram histogram(std::span<const std::uint8_t> plane) {
    if (plane.empty()) throw DomainError("histogram of an empty channel");
    ChannelHistogram h;
    for (std::uint8_t v : plane) ++h.bins[v];
    return h;
}

/// Level lookup table for the equalizer of `h`.
inline std::array<std::uint8_t, 256> equalization_lut(const ChannelHistogram& h) {
    const std::uint64_t n = h.total();
    if (n == 0) throw DomainError("equalization of an empty channel");
    std::array<std::uint8_t, 256> lut{};
    std::uint64_t cum = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        cum += h.bins[v];
        // floor(255*cum/n + 1/2) in exact integer arithmetic
        lut[v] = static_cast<std::uint8_t>((510 * cum + n) / (2 * n));
    }
    return lut;
}

inline std::vector<std::uint8_t> equalize(std::span<const std::uint8_t> plane) {
    const auto lut = equalization_lut(histogram(plane));
    std::vector<std::uint8_t> out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = lut[plane[i]];
    return out;
}

/// Equalizes each of the three channels independently.
inline Image8 equalize_channels(const Image8& img) {
    Image8 out = img;
    for (std::size_t c = 0; c < 3; ++c) out.set_plane(c, equalize(img.plane(c)));
    return out;
}

}  // namespace cvd
