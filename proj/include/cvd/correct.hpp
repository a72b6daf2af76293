#pragma once

// Adaptive correction.
//
// Method A builds an absolute protan filter and an absolute deuteran filter
// (mean mixing of the affected band into the other two, optionally followed
// by histogram equalization of the mixed bands) and blends them with the
// original by weights derived from fuzzy rules on the profile.
//
// Method B applies a single row-stochastic matrix parameterized by the protan
// and deuteran degrees, optionally followed by equalization of all three
// channels.
//
// Either method can run on RGB or on LMS. In LMS, planes are rescaled by the
// row sums of the RGB->LMS matrix so that white maps to (1,1,1) wherever a
// [0,1] range is needed (Method A mixing, equalization).

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cvd/color_core.hpp"
#include "cvd/histogram.hpp"
#include "cvd/profile.hpp"
#include "cvd/simulate.hpp"

namespace cvd {

enum class Method { A, B };

struct CorrectionOptions {
    Method method = Method::B;
    ColorSpace domain = ColorSpace::RGB;
    bool equalize = false;
};

/// Blend weights of Method A. Always sums to one.
struct FuzzyWeights {
    double x_p = 0.0;
    double x_d = 0.0;
    double x_n = 1.0;
};

/// Min-conjunction, complement-negation rules, then normalization.
/// With no rule firing the original image is kept: (0, 0, 1).
inline FuzzyWeights fuzzy_weights(const FuzzyProfile& profile) {
    profile.validate();
    const double xp = std::min(profile.beta, profile.alpha_p);
    const double xd = std::min(profile.beta, profile.alpha_d);
    const double xn = std::min(profile.alpha_n, 1.0 - profile.beta);
    const double sum = xp + xd + xn;
    if (sum <= 0.0) return {0.0, 0.0, 1.0};
    return {xp / sum, xd / sum, xn / sum};
}

namespace detail {

inline void equalize_channel(ImageF& img, std::size_t c) {
    std::vector<std::uint8_t> plane(img.pixel_count());
    auto data = img.data();
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = quantize(data[i * 3 + c]);
    const auto eq = equalize(plane);
    for (std::size_t i = 0; i < plane.size(); ++i) data[i * 3 + c] = eq[i] / 255.0;
}

/// Mixes `source` into the two other channels by averaging, then optionally
/// equalizes those two channels. `source` itself is left untouched.
inline ImageF mean_mix(const ImageF& img, std::size_t source, bool equalize_mixed) {
    ImageF out = img;
    auto data = out.data();
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const double s = data[i * 3 + source];
        for (std::size_t c = 0; c < 3; ++c) {
            if (c != source) data[i * 3 + c] = 0.5 * (s + data[i * 3 + c]);
        }
    }
    if (equalize_mixed) {
        for (std::size_t c = 0; c < 3; ++c) {
            if (c != source) equalize_channel(out, c);
        }
    }
    return out;
}

inline ImageF scale_planes(const ImageF& img, const Vec3& factors) {
    return apply_matrix(img, Matrix3::diagonal(factors[0], factors[1], factors[2]));
}

/// LMS image rescaled so that RGB white lands on (1,1,1).
inline ImageF to_normalized_lms(const ImageF& rgb) {
    const Vec3 max = rgb_to_lms_matrix().row_sums();
    return scale_planes(rgb_to_lms(rgb), {1.0 / max[0], 1.0 / max[1], 1.0 / max[2]});
}

inline ImageF from_normalized_lms(const ImageF& lms) {
    return lms_to_rgb(scale_planes(lms, rgb_to_lms_matrix().row_sums()));
}

}  // namespace detail

/// Protan filter: g' = (r+g)/2, b' = (r+b)/2, red kept. Channels are taken
/// positionally, so an LMS image is filtered with (L,M,S) in the (r,g,b) roles.
inline ImageF method_a_protan(const ImageF& img, bool equalize) { return detail::mean_mix(img, 0, equalize); }

/// Deuteran filter: r' = (r+g)/2, b' = (g+b)/2, green kept.
inline ImageF method_a_deuteran(const ImageF& img, bool equalize) { return detail::mean_mix(img, 1, equalize); }

/// Weighted blend f* = x_p f_p + x_d f_d + x_n f, all RGB.
inline ImageF method_a_float(const ImageF& rgb, const FuzzyProfile& profile, const CorrectionOptions& opts) {
    require_space(rgb, ColorSpace::RGB, "method_a");
    const FuzzyWeights w = fuzzy_weights(profile);

    auto filtered = [&](bool protan) {
        if (opts.domain == ColorSpace::RGB) {
            return protan ? method_a_protan(rgb, opts.equalize) : method_a_deuteran(rgb, opts.equalize);
        }
        const ImageF lms = detail::to_normalized_lms(rgb);
        return detail::from_normalized_lms(protan ? method_a_protan(lms, opts.equalize)
                                                  : method_a_deuteran(lms, opts.equalize));
    };

    ImageF out(rgb.width(), rgb.height(), ColorSpace::RGB);
    auto dst = out.data();
    const auto src = rgb.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = w.x_n * src[i];
    if (w.x_p > 0.0) {
        const ImageF fp = filtered(true);
        const auto p = fp.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w.x_p * p[i];
    }
    if (w.x_d > 0.0) {
        const ImageF fd = filtered(false);
        const auto d = fd.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w.x_d * d[i];
    }
    return out;
}

inline Image8 method_a(const Image8& img, const FuzzyProfile& profile, const CorrectionOptions& opts) {
    if (opts.method != Method::A) throw ContractError("method_a called with options for method B");
    return to_bytes(method_a_float(to_float(img), profile, opts));
}

/// Unified correction matrix; every row is non-negative and sums to one.
inline Matrix3 method_b_matrix(double alpha_p, double alpha_d) {
    detail::check_degree(alpha_p, "alpha_p");
    detail::check_degree(alpha_d, "alpha_d");
    return Matrix3::from_rows({
        1.0 - alpha_d / 2.0, alpha_d / 2.0, 0.0,
        alpha_p / 2.0, 1.0 - alpha_p / 2.0, 0.0,
        alpha_p / 4.0, alpha_d / 4.0, 1.0 - (alpha_p + alpha_d) / 4.0,
    });
}

inline ImageF method_b_float(const ImageF& rgb, const FuzzyProfile& profile, const CorrectionOptions& opts) {
    require_space(rgb, ColorSpace::RGB, "method_b");
    profile.validate();
    const Matrix3 m = method_b_matrix(profile.alpha_p, profile.alpha_d);

    if (opts.domain == ColorSpace::RGB) {
        ImageF out = apply_matrix(rgb, m);
        if (opts.equalize) {
            for (std::size_t c = 0; c < 3; ++c) detail::equalize_channel(out, c);
        }
        return out;
    }

    ImageF lms = apply_matrix(rgb_to_lms(rgb), m);
    if (!opts.equalize) return lms_to_rgb(lms);
    const Vec3 max = rgb_to_lms_matrix().row_sums();
    lms = detail::scale_planes(lms, {1.0 / max[0], 1.0 / max[1], 1.0 / max[2]});
    for (std::size_t c = 0; c < 3; ++c) detail::equalize_channel(lms, c);
    return detail::from_normalized_lms(lms);
}

inline Image8 method_b(const Image8& img, const FuzzyProfile& profile, const CorrectionOptions& opts) {
    if (opts.method != Method::B) throw ContractError("method_b called with options for method A");
    return to_bytes(method_b_float(to_float(img), profile, opts));
}

inline Image8 correct(const Image8& img, const FuzzyProfile& profile, const CorrectionOptions& opts) {
    return opts.method == Method::A ? method_a(img, profile, opts) : method_b(img, profile, opts);
}

}  // namespace cvd
