#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

/// Fresh per-process directory under the system temp dir; ctest runs test
/// cases as parallel processes.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("cvd_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
