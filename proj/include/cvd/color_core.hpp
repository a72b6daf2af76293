#pragma once

// Raster types, 3x3 color transforms and the RGB <-> LMS conversion pair.
//
// All pixel math runs on ImageF (double precision, nominal range [0,1]).
// Values are clamped only when quantizing back to Image8, so negative or
// >1 intermediates produced by the simulation matrices survive until the
// end of a pipeline.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvd/error.hpp"

namespace cvd {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 real matrix.
class Matrix3 {
public:
    constexpr Matrix3() = default;

    /// Throws DomainError if any entry is not finite.
    static Matrix3 from_rows(const std::array<double, 9>& entries) {
        for (double v : entries) {
            if (!std::isfinite(v)) throw DomainError("Matrix3 entries must be finite");
        }
        Matrix3 m;
        m.m_ = entries;
        return m;
    }

    static constexpr Matrix3 identity() { return diagonal(1.0, 1.0, 1.0); }

    static constexpr Matrix3 diagonal(double a, double b, double c) {
        Matrix3 m;
        m.m_ = {a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, c};
        return m;
    }

    [[nodiscard]] constexpr double operator()(std::size_t row, std::size_t col) const {
        return m_[row * 3 + col];
    }
    constexpr double& operator()(std::size_t row, std::size_t col) { return m_[row * 3 + col]; }

    [[nodiscard]] constexpr const std::array<double, 9>& entries() const { return m_; }

    [[nodiscard]] constexpr Vec3 operator*(const Vec3& v) const {
        return {m_[0] * v[0] + m_[1] * v[1] + m_[2] * v[2],
                m_[3] * v[0] + m_[4] * v[1] + m_[5] * v[2],
                m_[6] * v[0] + m_[7] * v[1] + m_[8] * v[2]};
    }

    [[nodiscard]] constexpr Matrix3 operator*(const Matrix3& o) const {
        Matrix3 r;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        }
        return r;
    }

    [[nodiscard]] constexpr double determinant() const {
        return m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) -
               m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
               m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
    }

    [[nodiscard]] Vec3 row_sums() const {
        return {m_[0] + m_[1] + m_[2], m_[3] + m_[4] + m_[5], m_[6] + m_[7] + m_[8]};
    }

    friend constexpr bool operator==(const Matrix3&, const Matrix3&) = default;

private:
    std::array<double, 9> m_{};
};

/// Largest elementwise absolute difference.
inline double max_abs_diff(const Matrix3& a, const Matrix3& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < 9; ++i) d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
    return d;
}

/// Inverse via adjugate / determinant. Throws SingularMatrixError when |det| <= 1e-12.
inline Matrix3 invert3(const Matrix3& m) {
    const double det = m.determinant();
    if (!(std::abs(det) > 1e-12)) throw SingularMatrixError(det);
    const auto& a = m.entries();
    const double inv = 1.0 / det;
    return Matrix3::from_rows({
        (a[4] * a[8] - a[5] * a[7]) * inv,
        (a[2] * a[7] - a[1] * a[8]) * inv,
        (a[1] * a[5] - a[2] * a[4]) * inv,
        (a[5] * a[6] - a[3] * a[8]) * inv,
        (a[0] * a[8] - a[2] * a[6]) * inv,
        (a[2] * a[3] - a[0] * a[5]) * inv,
        (a[3] * a[7] - a[4] * a[6]) * inv,
        (a[1] * a[6] - a[0] * a[7]) * inv,
        (a[0] * a[4] - a[1] * a[3]) * inv,
    });
}

/// Cone-response transform from stored RGB values.
inline const Matrix3& rgb_to_lms_matrix() {
    static const Matrix3 m = Matrix3::from_rows({
        17.8824, 43.5161, 4.1194,
        3.4557, 27.1554, 3.8671,
        0.0300, 0.1843, 1.4671,
    });
    return m;
}

/// Exact numerical inverse of rgb_to_lms_matrix().
inline const Matrix3& lms_to_rgb_matrix() {
    static const Matrix3 m = invert3(rgb_to_lms_matrix());
    return m;
}

enum class ColorSpace { RGB, LMS };

inline const char* to_string(ColorSpace s) { return s == ColorSpace::RGB ? "RGB" : "LMS"; }

/// 8-bit, 3-channel, row-major raster.
class Image8 {
public:
    Image8(std::size_t width, std::size_t height)
        : Image8(width, height, std::vector<std::uint8_t>(width * height * 3, 0)) {}

    Image8(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width_ == 0 || height_ == 0) throw DomainError("image dimensions must be positive");
        if (data_.size() != width_ * height_ * 3) throw DomainError("image data length must be width*height*3");
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t pixel_count() const noexcept { return width_ * height_; }

    [[nodiscard]] std::span<const std::uint8_t> data() const noexcept { return data_; }
    [[nodiscard]] std::span<std::uint8_t> data() noexcept { return data_; }

    [[nodiscard]] std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
        return data_[(y * width_ + x) * 3 + c];
    }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) { return data_[(y * width_ + x) * 3 + c]; }

    /// Copy of one channel as a contiguous plane.
    [[nodiscard]] std::vector<std::uint8_t> plane(std::size_t c) const {
        std::vector<std::uint8_t> out(pixel_count());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * 3 + c];
        return out;
    }

    void set_plane(std::size_t c, std::span<const std::uint8_t> values) {
        if (values.size() != pixel_count()) throw DomainError("plane size mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) data_[i * 3 + c] = values[i];
    }

    friend bool operator==(const Image8&, const Image8&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> data_;
};

/// Floating-point raster tagged with the color space its triples live in.
class ImageF {
public:
    ImageF(std::size_t width, std::size_t height, ColorSpace space)
        : ImageF(width, height, std::vector<double>(width * height * 3, 0.0), space) {}

    ImageF(std::size_t width, std::size_t height, std::vector<double> data, ColorSpace space)
        : width_(width), height_(height), data_(std::move(data)), space_(space) {
        if (width_ == 0 || height_ == 0) throw DomainError("image dimensions must be positive");
        if (data_.size() != width_ * height_ * 3) throw DomainError("image data length must be width*height*3");
    }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t pixel_count() const noexcept { return width_ * height_; }
    [[nodiscard]] ColorSpace space() const noexcept { return space_; }
    void set_space(ColorSpace s) noexcept { space_ = s; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Vec3 pixel(std::size_t i) const { return {data_[i * 3], data_[i * 3 + 1], data_[i * 3 + 2]}; }
    void set_pixel(std::size_t i, const Vec3& v) {
        data_[i * 3] = v[0];
        data_[i * 3 + 1] = v[1];
        data_[i * 3 + 2] = v[2];
    }

    friend bool operator==(const ImageF&, const ImageF&) = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> data_;
    ColorSpace space_;
};

inline void require_space(const ImageF& img, ColorSpace expected, const char* op) {
    if (img.space() != expected) {
        throw ContractError(std::string(op) + ": expected " + to_string(expected) + " image, got " +
                            to_string(img.space()));
    }
}

/// Left-multiplies every pixel by `m`. The space tag is kept unless `space` is given.
inline ImageF apply_matrix(const ImageF& img, const Matrix3& m, std::optional<ColorSpace> space = std::nullopt) {
    ImageF out(img.width(), img.height(), space.value_or(img.space()));
    for (std::size_t i = 0; i < img.pixel_count(); ++i) out.set_pixel(i, m * img.pixel(i));
    return out;
}

inline ImageF rgb_to_lms(const ImageF& img) {
    require_space(img, ColorSpace::RGB, "rgb_to_lms");
    return apply_matrix(img, rgb_to_lms_matrix(), ColorSpace::LMS);
}

inline ImageF lms_to_rgb(const ImageF& img) {
    require_space(img, ColorSpace::LMS, "lms_to_rgb");
    return apply_matrix(img, lms_to_rgb_matrix(), ColorSpace::RGB);
}

/// Clamp to [0,1], scale by 255, round half-up.
inline std::uint8_t quantize(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

inline ImageF to_float(const Image8& img) {
    ImageF out(img.width(), img.height(), ColorSpace::RGB);
    auto dst = out.data();
    auto src = img.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0;
    return out;
}

inline Image8 to_bytes(const ImageF& img) {
    require_space(img, ColorSpace::RGB, "to_bytes");
    Image8 out(img.width(), img.height());
    auto dst = out.data();
    auto src = img.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize(src[i]);
    return out;
}

}  // namespace cvd
