#pragma once

// Ten deterministic, continuous-tone test images built procedurally so the
// repository needs no binary fixtures. Index 1 mimics the classic red
// tomato / green pepper confusion scene; index 6 is an Ishihara-style dot
// plate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "cvd/color_core.hpp"

namespace cvd::samples {

namespace detail {

inline std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5); }

inline void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    h = std::fmod(h, 1.0) * 6.0;
    const int i = static_cast<int>(h);
    const double f = h - i;
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    switch (i % 6) {
        case 0: r = v, g = t, b = p; break;
        case 1: r = q, g = v, b = p; break;
        case 2: r = p, g = v, b = t; break;
        case 3: r = p, g = q, b = v; break;
        case 4: r = t, g = p, b = v; break;
        default: r = v, g = p, b = q; break;
    }
}

/// Uniform double in [0,1) straight from the engine bits.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// 7-segment style "74" mask on the unit square.
inline bool digit_mask(double x, double y) {
    auto seg = [](double x, double y, double x0, double y0, double x1, double y1) {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    };
    const double t = 0.07;
    // 7
    if (seg(x, y, 0.18, 0.25, 0.45, 0.25 + t)) return true;
    if (seg(x, y, 0.45 - t, 0.25, 0.45, 0.75)) return true;
    // 4
    if (seg(x, y, 0.55, 0.25, 0.55 + t, 0.52)) return true;
    if (seg(x, y, 0.55, 0.52 - t, 0.82, 0.52)) return true;
    return seg(x, y, 0.82 - t, 0.25, 0.82, 0.75);
}

}  // namespace detail

inline constexpr int kSyntheticCount = 10;

inline std::string synthetic_name(int index) {
    static const char* names[kSyntheticCount] = {"hue_sweep", "tomatoes",   "plasma", "diagonal", "rings",
                                                  "patches",   "dot_plate", "foliage", "noise",   "bars"};
    return std::string("img") + static_cast<char>('0' + index) + "_" + names[index];
}

inline Image8 synthetic_image(int index, std::size_t w, std::size_t h) {
    using detail::to_byte;
    Image8 img(w, h);
    std::mt19937_64 rng(0xC0FFEEull + static_cast<std::uint64_t>(index));
    const double pi = std::numbers::pi;

    auto put = [&](std::size_t x, std::size_t y, double r, double g, double b) {
        img.at(x, y, 0) = to_byte(r);
        img.at(x, y, 1) = to_byte(g);
        img.at(x, y, 2) = to_byte(b);
    };

    switch (index) {
        case 0:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    double r, g, b;
                    detail::hsv_to_rgb(double(x) / w, 0.9, 0.25 + 0.75 * double(y) / h, r, g, b);
                    put(x, y, r, g, b);
                }
            break;
        case 1: {
            struct Blob { double cx, cy, rad, r, g, b; };
            Blob blobs[8];
            for (int i = 0; i < 8; ++i) {
                const bool tomato = i % 2 == 0;
                blobs[i] = {detail::unit(rng), detail::unit(rng), 0.08 + 0.08 * detail::unit(rng),
                            tomato ? 0.85 : 0.25, tomato ? 0.15 : 0.6, tomato ? 0.1 : 0.12};
            }
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double u = double(x) / w, v = double(y) / h;
                    double r = 0.45 + 0.1 * v, g = 0.4 + 0.05 * u, b = 0.2;
                    for (const auto& bl : blobs) {
                        const double d = std::hypot(u - bl.cx, v - bl.cy) / bl.rad;
                        if (d < 1.0) {
                            const double shade = 0.6 + 0.4 * std::sqrt(1.0 - d * d);
                            r = bl.r * shade, g = bl.g * shade, b = bl.b * shade;
                        }
                    }
                    put(x, y, r, g, b);
                }
            break;
        }
        case 2:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double u = double(x) / w, v = double(y) / h;
                    put(x, y, 0.5 + 0.5 * std::sin(2 * pi * (u * 1.3 + v * 0.4)),
                        0.5 + 0.5 * std::sin(2 * pi * (u * 0.7 - v * 1.1) + 1.0),
                        0.5 + 0.5 * std::sin(2 * pi * std::hypot(u - 0.5, v - 0.5) * 2.0));
                }
            break;
        case 3:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double u = double(x) / w, v = double(y) / h;
                    put(x, y, u, v, 1.0 - 0.5 * (u + v));
                }
            break;
        case 4:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double d = std::hypot(double(x) / w - 0.5, double(y) / h - 0.5);
                    const double s = 0.5 + 0.5 * std::sin(d * 40.0);
                    put(x, y, 0.2 + 0.7 * s, 0.2 + 0.7 * (1.0 - s), 0.25 + 0.3 * d);
                }
            break;
        case 5: {
            const std::size_t cells = 6;
            double pal[cells * cells][3];
            for (auto& c : pal) detail::hsv_to_rgb(detail::unit(rng), 0.3 + 0.7 * detail::unit(rng), 0.3 + 0.7 * detail::unit(rng), c[0], c[1], c[2]);
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const auto& c = pal[(y * cells / h) * cells + x * cells / w];
                    const double shade = 0.9 + 0.1 * std::sin(double(x + y) * 0.05);
                    put(x, y, c[0] * shade, c[1] * shade, c[2] * shade);
                }
            break;
        }
        case 6: {
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) put(x, y, 0.96, 0.94, 0.9);
            for (int i = 0; i < 1800; ++i) {
                const double cx = detail::unit(rng), cy = detail::unit(rng);
                if (std::hypot(cx - 0.5, cy - 0.5) > 0.47) continue;
                const double rad = (0.008 + 0.014 * detail::unit(rng));
                const double jitter = 0.12 * detail::unit(rng);
                const bool figure = detail::digit_mask(cx, cy);
                const double r = figure ? 0.85 - jitter : 0.45 + jitter;
                const double g = figure ? 0.45 + jitter : 0.6 - jitter;
                const double b = figure ? 0.25 : 0.3 + jitter;
                const auto x0 = static_cast<std::size_t>(std::max(0.0, (cx - rad) * w));
                const auto x1 = static_cast<std::size_t>(std::min(double(w - 1), (cx + rad) * w));
                const auto y0 = static_cast<std::size_t>(std::max(0.0, (cy - rad) * h));
                const auto y1 = static_cast<std::size_t>(std::min(double(h - 1), (cy + rad) * h));
                for (std::size_t y = y0; y <= y1; ++y)
                    for (std::size_t x = x0; x <= x1; ++x)
                        if (std::hypot(double(x) / w - cx, double(y) / h - cy) <= rad) put(x, y, r, g, b);
            }
            break;
        }
        case 7:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double u = double(x) / w, v = double(y) / h;
                    const double leaf = 0.5 + 0.5 * std::sin(u * 17.0 + std::sin(v * 9.0) * 2.0);
                    put(x, y, 0.3 + 0.5 * leaf * v, 0.35 + 0.45 * (1 - leaf), 0.15 + 0.2 * u);
                }
            break;
        case 8: {
            const std::size_t g = 9;
            double lattice[g * g][3];
            for (auto& c : lattice)
                for (double& ch : c) ch = detail::unit(rng);
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double fx = double(x) / w * (g - 1), fy = double(y) / h * (g - 1);
                    const auto ix = std::min<std::size_t>(static_cast<std::size_t>(fx), g - 2);
                    const auto iy = std::min<std::size_t>(static_cast<std::size_t>(fy), g - 2);
                    const double tx = fx - ix, ty = fy - iy;
                    const double sx = tx * tx * (3 - 2 * tx), sy = ty * ty * (3 - 2 * ty);
                    double c[3];
                    for (int k = 0; k < 3; ++k) {
                        const double a = lattice[iy * g + ix][k], b = lattice[iy * g + ix + 1][k];
                        const double cc = lattice[(iy + 1) * g + ix][k], d = lattice[(iy + 1) * g + ix + 1][k];
                        c[k] = (a + (b - a) * sx) * (1 - sy) + (cc + (d - cc) * sx) * sy;
                    }
                    put(x, y, c[0], c[1], c[2]);
                }
            break;
        }
        default:
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const double u = double(x) / w, v = double(y) / h;
                    if (v < 0.5) {
                        put(x, y, u, u, u);
                    } else {
                        double r, g, b;
                        detail::hsv_to_rgb(std::floor(u * 8) / 8.0, 0.8, 0.4 + 0.6 * (v - 0.5) * 2, r, g, b);
                        put(x, y, r, g, b);
                    }
                }
            break;
    }
    return img;
}

}  // namespace cvd::samples
