#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "retinexad/image.hpp"

namespace retinexad::io {

enum class ImageFormat { kPng, kPpm };

struct LoadedImage {
  ColourImage rgb;
  ImageFormat format = ImageFormat::kPng;
};

/// 8-bit interleaved RGB raster.
struct Rgb8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // RGBRGB..., row-major
};

/// v/255 per sample.
ColourImage to_colour(const Rgb8& raster);
/// round(v*255) clamped to [0,255].
Rgb8 to_rgb8(const ColourImage& rgb);
/// Rounds an image through 8 bits, i.e. what writing and re-reading yields.
ColourImage quantize8(const ColourImage& rgb);

Rgb8 decode_ppm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_ppm(const Rgb8& raster);
Rgb8 decode_png(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_png(const Rgb8& raster);

/// Format from the file's magic bytes. Throws IoError when unrecognized.
ImageFormat sniff_format(const std::vector<std::uint8_t>& bytes);

/// Reads a binary PPM (P6, maxval 255) or 8-bit PNG. Throws IoError.
LoadedImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ColourImage& rgb, ImageFormat format);

std::string extension(ImageFormat format);

/// Whole-file helpers. Writes go to a sibling temp file renamed into place.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace retinexad::io
