// Writes the ten synthetic corpus images as PNG, ready for `cvdtool survey gen`.
//
//   make_corpus OUT_DIR [SIZE]

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "cvd/image_io.hpp"
#include "synthetic_corpus.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s OUT_DIR [SIZE]\n", argv[0]);
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    const std::size_t size = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 300;
    if (size == 0) {
        std::fprintf(stderr, "SIZE must be positive\n");
        return 1;
    }
    std::filesystem::create_directories(dir);
    for (int i = 0; i < cvd::samples::kSyntheticCount; ++i) {
        const auto path = dir / (cvd::samples::synthetic_name(i) + ".png");
        cvd::write_image(path, cvd::samples::synthetic_image(i, size, size));
        std::printf("%s\n", path.string().c_str());
    }
}
