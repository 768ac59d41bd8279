#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "retinexad/error.hpp"

namespace retinexad::io {
namespace {

constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// Reads the next whitespace-delimited header token, skipping # comments.
std::string next_token(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < b.size() && !std::isspace(b[pos]) && b[pos] != '#') tok.push_back(static_cast<char>(b[pos++]));
  return tok;
}

int parse_positive(const std::string& tok, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
      tok.size() > 9) {
    throw IoError(std::string("malformed PPM ") + what);
  }
  const int v = std::stoi(tok);
  if (v <= 0) throw IoError(std::string("malformed PPM ") + what);
  return v;
}

}  // namespace

ColourImage to_colour(const Rgb8& raster) {
  Plane r(raster.width, raster.height), g(raster.width, raster.height), b(raster.width, raster.height);
  auto R = r.values(), G = g.values(), B = b.values();
  for (std::size_t k = 0; k < R.size(); ++k) {
    R[k] = raster.pixels[3 * k] / 255.0;
    G[k] = raster.pixels[3 * k + 1] / 255.0;
    B[k] = raster.pixels[3 * k + 2] / 255.0;
  }
  return ColourImage(std::move(r), std::move(g), std::move(b));
}

Rgb8 to_rgb8(const ColourImage& rgb) {
  Rgb8 out{rgb.width(), rgb.height(), {}};
  out.pixels.resize(3 * rgb[0].size());
  for (std::size_t c = 0; c < 3; ++c) {
    auto v = rgb[c].values();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double q = std::round(std::clamp(v[k], 0.0, 1.0) * 255.0);
      out.pixels[3 * k + c] = static_cast<std::uint8_t>(q);
    }
  }
  return out;
}

ColourImage quantize8(const ColourImage& rgb) { return to_colour(to_rgb8(rgb)); }

Rgb8 decode_ppm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  if (next_token(bytes, pos) != "P6") throw IoError("not a binary PPM (P6)");
  Rgb8 out;
  out.width = parse_positive(next_token(bytes, pos), "width");
  out.height = parse_positive(next_token(bytes, pos), "height");
  if (parse_positive(next_token(bytes, pos), "maxval") != 255) throw IoError("only 8-bit PPM (maxval 255) is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw IoError("malformed PPM header");
  ++pos;  // single whitespace before the raster
  const std::size_t need = 3ull * static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
  if (bytes.size() - pos < need) throw IoError("truncated PPM raster");
  out.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return out;
}

std::vector<std::uint8_t> encode_ppm(const Rgb8& raster) {
  const std::string header = "P6\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.pixels.begin(), raster.pixels.end());
  return out;
}

Rgb8 decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError(std::string("PNG decode failed: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  Rgb8 out{static_cast<int>(image.width), static_cast<int>(image.height), {}};
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed: " + msg);
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const Rgb8& raster) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, raster.pixels.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.pixels.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

ImageFormat sniff_format(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
    return ImageFormat::kPng;
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return ImageFormat::kPpm;
  throw IoError("unrecognized image format (expected PNG or binary PPM)");
}

LoadedImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const ImageFormat fmt = sniff_format(bytes);
  const Rgb8 raster = fmt == ImageFormat::kPng ? decode_png(bytes) : decode_ppm(bytes);
  return {to_colour(raster), fmt};
}

void write_image(const std::filesystem::path& path, const ColourImage& rgb, ImageFormat format) {
  const Rgb8 raster = to_rgb8(rgb);
  write_file_atomic(path, format == ImageFormat::kPng ? encode_png(raster) : encode_ppm(raster));
}

std::string extension(ImageFormat format) { return format == ImageFormat::kPng ? ".png" : ".ppm"; }

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace retinexad::io
