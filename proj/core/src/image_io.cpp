// Copyright 2026 The Matforge Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matforge/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace matforge {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_u32_le(std::ofstream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32_le(std::ifstream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void write_png(const std::string& path, const TextureImage& image) {
  if (image.width <= 0 || image.height <= 0) {
    throw ImageIoError("write_png: empty image");
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw ImageIoError("write_png: cannot open '" + path + "'");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw ImageIoError("write_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw ImageIoError("write_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ImageIoError("write_png: libpng error writing '" + path + "'");
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 3);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const float* px = image.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(static_cast<double>(px[c]), 0.0, 1.0);
        row[static_cast<std::size_t>(x) * 3 + c] =
            static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

TextureImage read_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw ImageIoError("read_png: cannot open '" + path + "'");

  unsigned char header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8)) {
    throw ImageIoError("read_png: '" + path + "' is not a PNG file");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw ImageIoError("read_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw ImageIoError("read_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageIoError("read_png: libpng error reading '" + path + "'");
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  // Normalize whatever arrives to 8-bit RGB.
  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes < static_cast<std::size_t>(width) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ImageIoError("read_png: unexpected row layout in '" + path + "'");
  }

  TextureImage image(width, height);
  std::vector<unsigned char> row(rowbytes);
  for (int y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < width; ++x) {
      float* px = image.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        px[c] = static_cast<float>(row[static_cast<std::size_t>(x) * 3 + c] / 255.0);
      }
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

void write_f32(const std::string& path, const TextureImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("write_f32: cannot open '" + path + "'");
  write_u32_le(out, static_cast<std::uint32_t>(image.width));
  write_u32_le(out, static_cast<std::uint32_t>(image.height));
  static_assert(sizeof(float) == 4);
  // Stored little-endian; this writes native byte order, which the build
  // targets (x86-64/aarch64 linux) all share.
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size() * sizeof(float)));
  if (!out) throw ImageIoError("write_f32: short write to '" + path + "'");
}

TextureImage read_f32(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("read_f32: cannot open '" + path + "'");
  const std::uint32_t width = read_u32_le(in);
  const std::uint32_t height = read_u32_le(in);
  if (!in || width == 0 || height == 0 || width > 1u << 16 || height > 1u << 16) {
    throw ImageIoError("read_f32: bad header in '" + path + "'");
  }
  TextureImage image(static_cast<int>(width), static_cast<int>(height));
  in.read(reinterpret_cast<char*>(image.data.data()),
          static_cast<std::streamsize>(image.data.size() * sizeof(float)));
  if (in.gcount() !=
      static_cast<std::streamsize>(image.data.size() * sizeof(float))) {
    throw ImageIoError("read_f32: truncated data in '" + path + "'");
  }
  return image;
}

void write_image(const std::string& path, const TextureImage& image) {
  if (ends_with(path, ".f32")) {
    write_f32(path, image);
  } else if (ends_with(path, ".png")) {
    write_png(path, image);
  } else {
    throw ImageIoError("write_image: unsupported extension on '" + path + "'");
  }
}

TextureImage read_image(const std::string& path) {
  if (ends_with(path, ".f32")) return read_f32(path);
  if (ends_with(path, ".png")) return read_png(path);
  throw ImageIoError("read_image: unsupported extension on '" + path + "'");
}

}  // namespace matforge
