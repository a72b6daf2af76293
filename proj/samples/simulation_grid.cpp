// Renders an image under protan and deuteran simulation at degrees
// 0, 0.25, 0.5, 0.75, 1 as one contact sheet (two rows of five).
//
//   simulation_grid IN OUT

#include <cstdio>

#include "cvd/image_io.hpp"
#include "cvd/simulate.hpp"

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s IN OUT\n", argv[0]);
        return 1;
    }
    try {
        const cvd::Image8 in = cvd::read_image(argv[1]);
        const std::size_t w = in.width(), h = in.height();
        cvd::Image8 sheet(w * 5, h * 2);
        for (int row = 0; row < 2; ++row) {
            for (int k = 0; k < 5; ++k) {
                const double a = k * 0.25;
                const cvd::Image8 sim = cvd::simulate(in, row == 0 ? cvd::SimSpec{a, 0.0} : cvd::SimSpec{0.0, a});
                for (std::size_t y = 0; y < h; ++y)
                    for (std::size_t x = 0; x < w; ++x)
                        for (std::size_t c = 0; c < 3; ++c) sheet.at(k * w + x, row * h + y, c) = sim.at(x, y, c);
            }
        }
        cvd::write_image(argv[2], sheet);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
