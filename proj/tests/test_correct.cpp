#include <gtest/gtest.h>

#include <random>

#include "cvd/correct.hpp"
#include "oracle.hpp"
#include "synthetic_corpus.hpp"

using namespace cvd;

namespace {

const std::vector<oracle::Px> kPixels = {{255, 0, 0},   {0, 255, 0},    {0, 0, 255},   {200, 30, 40}, {10, 220, 90},
                                         {128, 128, 128}, {250, 200, 20}, {60, 90, 200}, {12, 34, 56},  {240, 240, 250}};

Image8 row_image(const std::vector<oracle::Px>& px) {
    std::vector<std::uint8_t> bytes;
    for (const auto& p : px)
        for (int c : p) bytes.push_back(static_cast<std::uint8_t>(c));
    return Image8(px.size(), 1, std::move(bytes));
}

std::vector<oracle::Px> pixels_of(const Image8& img) {
    std::vector<oracle::Px> out;
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        out.push_back({img.data()[i * 3], img.data()[i * 3 + 1], img.data()[i * 3 + 2]});
    return out;
}

CorrectionOptions opts(Method m, bool eq = false, ColorSpace d = ColorSpace::RGB) { return {m, d, eq}; }

Image8 to8(const ImageF& f) { return to_bytes(f); }

}  // namespace

TEST(FuzzyWeights, Examples) {
    const FuzzyWeights none = fuzzy_weights({0.0, 0.0, 0.0, 1.0});
    EXPECT_EQ(none.x_p, 0.0);
    EXPECT_EQ(none.x_d, 0.0);
    EXPECT_EQ(none.x_n, 1.0);

    const FuzzyWeights nothing_fires = fuzzy_weights({1.0, 0.0, 0.0, 0.0});
    EXPECT_EQ(nothing_fires.x_n, 1.0);

    const FuzzyWeights protan = fuzzy_weights({1.0, 1.0, 0.0, 0.0});
    EXPECT_EQ(protan.x_p, 1.0);
    EXPECT_EQ(protan.x_d, 0.0);

    // frozen from tests/oracle/make_goldens.py
    const FuzzyWeights mixed = fuzzy_weights({0.6, 0.5, 0.3, 0.4});
    EXPECT_NEAR(mixed.x_p, 5.0 / 12.0, 1e-15);
    EXPECT_NEAR(mixed.x_d, 3.0 / 12.0, 1e-15);
    EXPECT_NEAR(mixed.x_n, 4.0 / 12.0, 1e-15);
}

TEST(FuzzyWeights, PropertiesOnRandomProfiles) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const FuzzyProfile p{u(rng), u(rng), u(rng), u(rng)};
        const FuzzyWeights w = fuzzy_weights(p);
        EXPECT_GE(w.x_p, 0.0);
        EXPECT_GE(w.x_d, 0.0);
        EXPECT_GE(w.x_n, 0.0);
        EXPECT_NEAR(w.x_p + w.x_d + w.x_n, 1.0, 1e-12);
        const auto o = oracle::fuzzy_weights(p.beta, p.alpha_p, p.alpha_d, p.alpha_n);
        EXPECT_NEAR(w.x_p, o.p, 1e-15);
        EXPECT_NEAR(w.x_d, o.d, 1e-15);
    }
}

TEST(FuzzyWeights, RejectsOutOfRangeProfile) {
    EXPECT_THROW(fuzzy_weights({1.2, 0, 0, 0}), DomainError);
    EXPECT_THROW(fuzzy_weights({0, 0, -0.1, 0}), DomainError);
}

TEST(MethodA, FiltersKeepTheirProtectedBand) {
    const ImageF img = to_float(samples::synthetic_image(5, 40, 40));
    const ImageF p = method_a_protan(img, true);
    const ImageF d = method_a_deuteran(img, true);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        EXPECT_EQ(p.data()[i * 3], img.data()[i * 3]);
        EXPECT_EQ(d.data()[i * 3 + 1], img.data()[i * 3 + 1]);
    }
}

TEST(MethodA, UnequalizedFiltersAreMeans) {
    const ImageF img(1, 1, {0.2, 0.6, 1.0}, ColorSpace::RGB);
    const ImageF p = method_a_protan(img, false);
    EXPECT_DOUBLE_EQ(p.data()[1], 0.4);
    EXPECT_DOUBLE_EQ(p.data()[2], 0.6);
    const ImageF d = method_a_deuteran(img, false);
    EXPECT_DOUBLE_EQ(d.data()[0], 0.4);
    EXPECT_DOUBLE_EQ(d.data()[2], 0.8);
}

TEST(MethodA, EqualizedFilterGoldens) {
    const std::vector<oracle::Px> three = {{200, 30, 40}, {10, 220, 90}, {128, 128, 128}};
    // frozen from tests/oracle/make_goldens.py
    EXPECT_EQ(pixels_of(to8(method_a_protan(to_float(row_image(three)), true))),
              (std::vector<oracle::Px>{{200, 170, 170}, {10, 170, 85}, {128, 255, 255}}));
    EXPECT_EQ(pixels_of(to8(method_a_deuteran(to_float(row_image(three)), true))),
              (std::vector<oracle::Px>{{170, 30, 85}, {170, 220, 255}, {255, 128, 170}}));
}

TEST(MethodA, NormalProfileIsIdentity) {
    for (int i = 0; i < samples::kSyntheticCount; ++i) {
        const Image8 img = samples::synthetic_image(i, 32, 24);
        for (bool eq : {false, true}) {
            for (ColorSpace d : {ColorSpace::RGB, ColorSpace::LMS}) {
                EXPECT_EQ(method_a(img, {0.0, 0.0, 0.0, 1.0}, opts(Method::A, eq, d)), img);
            }
        }
    }
}

TEST(MethodA, FullProtanProfileIsTheProtanFilter) {
    const Image8 img = samples::synthetic_image(1, 32, 32);
    const Image8 out = method_a(img, {1.0, 1.0, 0.0, 0.0}, opts(Method::A, true));
    EXPECT_EQ(out, to8(method_a_protan(to_float(img), true)));
}

TEST(MethodA, MixedProfileGolden) {
    // frozen from tests/oracle/make_goldens.py
    const std::vector<oracle::Px> golden = {{223, 53, 53}, {32, 202, 32},   {0, 0, 170},    {179, 65, 72}, {36, 176, 90},
                                            {128, 128, 128}, {244, 210, 90}, {64, 84, 157}, {15, 29, 44},  {240, 240, 247}};
    const Image8 out = method_a(row_image(kPixels), {0.6, 0.5, 0.3, 0.4}, opts(Method::A));
    EXPECT_EQ(pixels_of(out), golden);
    EXPECT_EQ(oracle::method_a(kPixels, 0.6, 0.5, 0.3, 0.4, false), golden);
}

TEST(MethodA, MatchesOracleWithEqualization) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        std::vector<oracle::Px> px(64);
        for (auto& p : px) p = {int(rng() % 256), int(rng() % 256), int(rng() % 256)};
        const FuzzyProfile prof{u(rng), u(rng), u(rng), u(rng)};
        for (bool eq : {false, true}) {
            const auto got = pixels_of(method_a(row_image(px), prof, opts(Method::A, eq)));
            const auto want = oracle::method_a(px, prof.beta, prof.alpha_p, prof.alpha_d, prof.alpha_n, eq);
            for (std::size_t i = 0; i < px.size(); ++i)
                for (int c = 0; c < 3; ++c) ASSERT_LE(std::abs(got[i][c] - want[i][c]), 1);
        }
    }
}

TEST(MethodA, RejectsMismatchedOptions) {
    EXPECT_THROW(method_a(Image8(1, 1), {}, opts(Method::B)), ContractError);
    EXPECT_THROW(method_b(Image8(1, 1), {}, opts(Method::A)), ContractError);
}

TEST(MethodB, MatrixExamples) {
    EXPECT_EQ(method_b_matrix(0, 0), Matrix3::identity());
    const Matrix3 full = method_b_matrix(1, 1);
    EXPECT_EQ(full, Matrix3::from_rows({0.5, 0.5, 0, 0.5, 0.5, 0, 0.25, 0.25, 0.5}));
    EXPECT_THROW(method_b_matrix(1.1, 0), DomainError);
}

TEST(MethodB, RowStochasticOnGrid) {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const Matrix3 m = method_b_matrix(i / 20.0, j / 20.0);
            for (std::size_t r = 0; r < 3; ++r) {
                EXPECT_NEAR(m(r, 0) + m(r, 1) + m(r, 2), 1.0, 1e-15);
                for (std::size_t c = 0; c < 3; ++c) EXPECT_GE(m(r, c), 0.0);
            }
        }
}

TEST(MethodB, IdentityAtZeroAndGrayFixed) {
    for (int i = 0; i < samples::kSyntheticCount; ++i) {
        const Image8 img = samples::synthetic_image(i, 30, 20);
        EXPECT_EQ(method_b(img, {0.0, 0.0, 0.0, 1.0}, opts(Method::B)), img);
    }
    const Image8 gray(1, 1, {77, 77, 77});
    EXPECT_EQ(method_b(gray, {1, 1, 1, 0}, opts(Method::B)), gray);
}

TEST(MethodB, Goldens) {
    EXPECT_EQ(method_b(Image8(1, 1, {255, 0, 0}), {1, 1, 0, 0}, opts(Method::B)), Image8(1, 1, {255, 128, 64}));
    // frozen from tests/oracle/make_goldens.py
    const std::vector<oracle::Px> golden = {{153, 38, 19}, {102, 217, 51},  {0, 0, 185},    {132, 56, 50}, {94, 189, 110},
                                            {128, 128, 128}, {230, 208, 73}, {72, 86, 168}, {21, 31, 48},  {240, 240, 247}};
    EXPECT_EQ(pixels_of(method_b(row_image(kPixels), {0.8, 0.3, 0.8, 0.2}, opts(Method::B))), golden);
    for (std::size_t i = 0; i < kPixels.size(); ++i) EXPECT_EQ(oracle::method_b(kPixels[i], 0.3, 0.8), golden[i]);
}

TEST(MethodB, IgnoresBetaAndAlphaN) {
    const Image8 img = samples::synthetic_image(3, 16, 16);
    EXPECT_EQ(method_b(img, {0.1, 0.4, 0.6, 0.9}, opts(Method::B)), method_b(img, {0.9, 0.4, 0.6, 0.0}, opts(Method::B)));
}

TEST(MethodB, MonotoneInDeutanDegree) {
    // more alpha_d pulls red further toward green
    const Image8 img = row_image(kPixels);
    std::vector<int> prev(kPixels.size(), 0);
    for (int k = 0; k <= 10; ++k) {
        const auto out = pixels_of(method_b(img, {0, 0, k / 10.0, 0}, opts(Method::B)));
        for (std::size_t i = 0; i < kPixels.size(); ++i) {
            const int shift = std::abs(out[i][0] - kPixels[i][0]);
            EXPECT_GE(shift, prev[i]) << "pixel " << i << " at " << k;
            prev[i] = shift;
        }
    }
}

TEST(MethodB, EqualizedOutputSpansFullRange) {
    const Image8 img = samples::synthetic_image(2, 64, 64);
    const Image8 out = method_b(img, {1, 0.5, 0.5, 0}, opts(Method::B, true));
    for (std::size_t c = 0; c < 3; ++c) {
        const auto plane = out.plane(c);
        EXPECT_EQ(*std::max_element(plane.begin(), plane.end()), 255);
    }
}

TEST(CorrectLms, ZeroProfileRoundTripsWithinOneLevel) {
    for (int i = 0; i < samples::kSyntheticCount; ++i) {
        const Image8 img = samples::synthetic_image(i, 32, 32);
        const Image8 out = method_b(img, {0, 0, 0, 1}, opts(Method::B, false, ColorSpace::LMS));
        for (std::size_t k = 0; k < img.data().size(); ++k) ASSERT_LE(std::abs(int(out.data()[k]) - int(img.data()[k])), 1);
    }
}

TEST(CorrectLms, DiffersFromRgbAndStaysInRange) {
    const Image8 img = samples::synthetic_image(1, 48, 48);
    const FuzzyProfile prof{0.8, 0.8, 0.1, 0.2};
    for (Method m : {Method::A, Method::B}) {
        for (bool eq : {false, true}) {
            const Image8 lms = correct(img, prof, opts(m, eq, ColorSpace::LMS));
            const Image8 rgb = correct(img, prof, opts(m, eq, ColorSpace::RGB));
            EXPECT_EQ(lms.width(), img.width());
            EXPECT_NE(lms, rgb);
        }
    }
}

TEST(Correct, DispatchesOnMethod) {
    const Image8 img = samples::synthetic_image(4, 20, 20);
    const FuzzyProfile prof{0.7, 0.2, 0.7, 0.3};
    EXPECT_EQ(correct(img, prof, opts(Method::A, true)), method_a(img, prof, opts(Method::A, true)));
    EXPECT_EQ(correct(img, prof, opts(Method::B, true)), method_b(img, prof, opts(Method::B, true)));
}
