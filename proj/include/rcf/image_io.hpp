#pragma once

#include <filesystem>
#include <vector>

#include "rcf/features.hpp"

namespace rcf {

/// Decode a PNG/JPEG/BMP/PNM file into an 8-bit gray or RGB frame.
Frame read_frame(const std::filesystem::path& path);

void write_frame(const std::filesystem::path& path, const Frame& frame);

/// Image files in `dir`, sorted lexicographically by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace rcf
