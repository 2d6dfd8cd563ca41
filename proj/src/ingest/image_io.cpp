// SPDX-License-Identifier: Apache-2.0

#include "fragqa/ingest/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "fragqa/core/errors.hpp"

namespace fragqa {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

GrayImage read_png(const fs::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IngestError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IngestError("cannot decode PNG " + path.string() + ": " + msg);
  }
  GrayImage out(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return out;
}

// Skips whitespace and '#' comments in a PNM header.
void skip_pnm_space(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

int read_pnm_int(const std::string& data, std::size_t& pos, const fs::path& path) {
  skip_pnm_space(data, pos);
  std::size_t start = pos;
  while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
  if (start == pos || pos - start > 6) throw IngestError("corrupt PNM header in " + path.string());
  return std::stoi(data.substr(start, pos - start));
}

GrayImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
    throw IngestError("unsupported PNM variant in " + path.string());
  }
  const int channels = data[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  int w = read_pnm_int(data, pos, path);
  int h = read_pnm_int(data, pos, path);
  int maxval = read_pnm_int(data, pos, path);
  if (maxval != 255 || w <= 0 || h <= 0) throw IngestError("unsupported PNM header in " + path.string());
  ++pos;  // single whitespace before raster
  std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  if (data.size() < pos + need) throw IngestError("truncated PNM raster in " + path.string());
  GrayImage out(w, h);
  const auto* raster = reinterpret_cast<const std::uint8_t*>(data.data() + pos);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = channels == 1 ? raster[i] : luma(raster[3 * i], raster[3 * i + 1], raster[3 * i + 2]);
  }
  return out;
}

}  // namespace

bool is_supported_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

GrayImage read_gray_image(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IngestError("missing frame file " + path.string());
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm") return read_pnm(path);
  throw IngestError("unsupported image extension: " + path.string());
}

void write_png(const fs::path& path, const GrayImage& image) {
  png_image out;
  std::memset(&out, 0, sizeof out);
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(image.width);
  out.height = static_cast<png_uint_32>(image.height);
  out.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&out, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
    std::string msg = out.message;
    png_image_free(&out);
    throw IngestError("cannot write PNG " + path.string() + ": " + msg);
  }
}

}  // namespace fragqa
