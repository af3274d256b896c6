#pragma once

#include <filesystem>
#include <iosfwd>

#include "nlpr/image.hpp"

namespace nlpr {

// Binary 8-bit PGM (P5, maxval 255). Samples are scaled to [0,1] on read;
// on write they are clamped to [0,1] and rounded to the nearest level.
Image read_pgm(std::istream& in);
Image read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const Image& img);
void write_pgm(const std::filesystem::path& path, const Image& img);

}  // namespace nlpr
