#pragma once

// Graded protan / deuteran / hybrid deficiency simulation.
//
// The dichromat projections are blended with the identity by a fuzzy
// degree in [0,1]: degree 0 leaves LMS untouched, degree 1 is the full
// protanopia (L rebuilt from M,S) or deuteranopia (M rebuilt from L,S)
// projection. The hybrid matrix carries both rows at once.
//
// Hybrid cases with both degrees above 0.5 are accepted but look poor
// perceptually.

#include "cvd/color_core.hpp"

namespace cvd {

namespace detail {
inline constexpr double kProtanM = 2.0234;
inline constexpr double kProtanS = -2.5258;
inline constexpr double kDeutanL = 0.4942;
inline constexpr double kDeutanS = 1.2483;

inline void check_degree(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
    }
}
}  // namespace detail

/// Protan and deuteran degrees driving the simulation.
struct SimSpec {
    double alpha_p = 0.0;
    double alpha_d = 0.0;

    void validate() const {
        detail::check_degree(alpha_p, "alpha_p");
        detail::check_degree(alpha_d, "alpha_d");
    }
};

inline Matrix3 hybrid_matrix(const SimSpec& spec) {
    spec.validate();
    const double p = spec.alpha_p;
    const double d = spec.alpha_d;
    return Matrix3::from_rows({
        1.0 - p, detail::kProtanM * p, detail::kProtanS * p,
        detail::kDeutanL * d, 1.0 - d, detail::kDeutanS * d,
        0.0, 0.0, 1.0,
    });
}

inline Matrix3 protanomaly_matrix(double alpha_p) { return hybrid_matrix({alpha_p, 0.0}); }

inline Matrix3 deuteranomaly_matrix(double alpha_d) { return hybrid_matrix({0.0, alpha_d}); }

/// RGB -> LMS -> deficit -> RGB, without quantization. Returns an RGB image.
inline ImageF simulate_float(const ImageF& rgb, const SimSpec& spec) {
    require_space(rgb, ColorSpace::RGB, "simulate");
    // Stages are applied separately rather than folded into one matrix;
    // the folded product is not bitwise the identity at degree 0.
    return lms_to_rgb(apply_matrix(rgb_to_lms(rgb), hybrid_matrix(spec)));
}

inline Image8 simulate(const Image8& img, const SimSpec& spec) {
    return to_bytes(simulate_float(to_float(img), spec));
}

}  // namespace cvd
