#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "monogenic/field.hpp"

namespace monogenic::io {

enum class ImageFormat { Pgm, Png };

std::string_view extension(ImageFormat f);  // ".pgm" / ".png"
std::optional<ImageFormat> parse_format(std::string_view name);

using Gray8 = Grid<std::uint8_t>;

// Grayscale in [0, 1]. Accepts binary PGM (P5, maxval up to 65535) and PNG
// (8/16-bit gray, RGB via BT.601 luma; alpha dropped), detected by signature.
// Throws UnreadableInput for missing/corrupt files, UnsupportedFormat otherwise.
ScalarField read_image(const std::filesystem::path& path);

// Binary P5 with maxval 255.
void write_pgm(const std::filesystem::path& path, const Gray8& img);
// 8-bit grayscale PNG.
void write_png(const std::filesystem::path& path, const Gray8& img);
// 1-bit grayscale PNG; nonzero mask entries are white.
void write_png_bilevel(const std::filesystem::path& path, const Mask& mask);

// PGM gets 0/255 samples, PNG a 1-bit image.
void write_edge_map(const std::filesystem::path& path, const Mask& mask, ImageFormat format);
void write_gray(const std::filesystem::path& path, const Gray8& img, ImageFormat format);

// Linear map of [min, max] onto [0, 255]; a flat field maps to 0.
Gray8 to_gray8(const ScalarField& f);
// Linear map of [lo, hi] onto [0, 255] with clamping.
Gray8 to_gray8(const ScalarField& f, double lo, double hi);

// Raw little-endian 32-bit float grid (PFM, "Pf", bottom row first).
void write_pfm(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_pfm(const std::filesystem::path& path);

}  // namespace monogenic::io
