#pragma once

#include <filesystem>

#include "het/image.hpp"

namespace het {

// Binary 8-bit PGM (P5, maxval 255), read and written bit-exactly.
Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const Frame& frame, const std::filesystem::path& path);

// Loads a frame from disk. PGM is handled natively; PNG/JPEG/BMP go
// through OpenCV when built with it, color inputs reduced to luminance
// via to_grayscale.
Frame load_frame(const std::filesystem::path& path);

bool png_jpeg_supported();

}  // namespace het
