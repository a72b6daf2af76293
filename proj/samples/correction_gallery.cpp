// Shows every correction variant for one profile, each followed by how a
// viewer with that profile would see it.
//
//   correction_gallery IN OUT_DIR BETA ALPHA_P ALPHA_D ALPHA_N

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "cvd/correct.hpp"
#include "cvd/image_io.hpp"

int main(int argc, char** argv) {
    if (argc != 7) {
        std::fprintf(stderr, "usage: %s IN OUT_DIR BETA ALPHA_P ALPHA_D ALPHA_N\n", argv[0]);
        return 1;
    }
    try {
        const cvd::Image8 in = cvd::read_image(argv[1]);
        const std::filesystem::path dir = argv[2];
        std::filesystem::create_directories(dir);
        const cvd::FuzzyProfile profile{std::atof(argv[3]), std::atof(argv[4]), std::atof(argv[5]), std::atof(argv[6])};
        profile.validate();
        const cvd::SimSpec viewer{profile.alpha_p, profile.alpha_d};

        cvd::write_image(dir / "original_seen.png", cvd::simulate(in, viewer));
        for (cvd::Method m : {cvd::Method::A, cvd::Method::B}) {
            for (cvd::ColorSpace d : {cvd::ColorSpace::RGB, cvd::ColorSpace::LMS}) {
                for (bool eq : {false, true}) {
                    const cvd::Image8 out = cvd::correct(in, profile, {m, d, eq});
                    const std::string stem = std::string(m == cvd::Method::A ? "a" : "b") +
                                             (d == cvd::ColorSpace::RGB ? "_rgb" : "_lms") + (eq ? "_eq" : "");
                    cvd::write_image(dir / (stem + ".png"), out);
                    cvd::write_image(dir / (stem + "_seen.png"), cvd::simulate(out, viewer));
                }
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
