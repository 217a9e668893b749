#pragma once

// PNG read/write (8/16-bit, gray or RGB) plus JPEG read for background
// photos. Backed by libpng/libjpeg; pixel values are quantized
// round-to-nearest on save and mapped back to [0,1] floats on load.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "flare/core.hpp"
#include "flare/imaging.hpp"

namespace flare {

// Largest edge accepted by the loader/saver; anything bigger is reported as
// a dimension error rather than an allocation failure.
inline constexpr int kMaxImageEdge = 32768;

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] inline void png_error_fn(png_structp png, png_const_charp msg) {
  (void)png;
  throw FormatError(std::string("png: ") + msg);
}

inline void png_warn_fn(png_structp, png_const_charp) {}

inline Image load_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warn_fn);
  if (!png) throw IoError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png: allocation failure");
  }

  std::vector<png_byte> raw;
  int width = 0, height = 0, channels = 0, bit_depth = 0;
  try {
    png_init_io(png, file.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    if (w == 0 || h == 0 || w > kMaxImageEdge || h > kMaxImageEdge)
      throw DimensionError("png: unsupported image dimensions in " + path);

    int color_type = png_get_color_type(png, info);
    bit_depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    channels = png_get_channels(png, info);
    if (channels == 2) {  // gray+alpha after stripping should not occur
      throw FormatError("png: unsupported channel layout in " + path);
    }
    if (channels != 1 && channels != 3)
      throw FormatError("png: unsupported channel count in " + path);

    width = static_cast<int>(w);
    height = static_cast<int>(h);
    std::size_t stride = png_get_rowbytes(png, info);
    raw.resize(stride * height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = raw.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(width, height, channels);
  std::size_t n = img.sample_count();
  if (bit_depth == 16) {
    // PNG stores 16-bit samples big-endian.
    for (std::size_t i = 0; i < n; ++i) {
      unsigned v = (unsigned(raw[2 * i]) << 8) | raw[2 * i + 1];
      img.data[i] = static_cast<float>(v / 65535.0);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      img.data[i] = static_cast<float>(raw[i] / 255.0);
  }
  return img;
}

inline Image load_jpeg(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open file: " + path);

  struct ErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
  } err;
  jpeg_decompress_struct cinfo;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = [](j_common_ptr c) {
    std::longjmp(reinterpret_cast<ErrorMgr*>(c->err)->jump, 1);
  };
  err.pub.output_message = [](j_common_ptr) {};

  std::vector<unsigned char> rowbuf;
  Image img;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError("jpeg: cannot decode " + path);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  int width = cinfo.output_width;
  int height = cinfo.output_height;
  if (width <= 0 || height <= 0 || width > kMaxImageEdge ||
      height > kMaxImageEdge) {
    jpeg_destroy_decompress(&cinfo);
    throw DimensionError("jpeg: unsupported image dimensions in " + path);
  }
  img = Image(width, height, 3);
  rowbuf.resize(static_cast<std::size_t>(width) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    unsigned char* rowp = rowbuf.data();
    int y = cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &rowp, 1);
    for (int i = 0; i < width * 3; ++i)
      img.data[static_cast<std::size_t>(y) * width * 3 + i] =
          static_cast<float>(rowbuf[i] / 255.0);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

inline bool has_png_magic(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open file: " + path);
  unsigned char magic[8] = {};
  std::size_t got = std::fread(magic, 1, 8, file.get());
  return got == 8 && png_sig_cmp(magic, 0, 8) == 0;
}

inline bool has_jpeg_magic(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open file: " + path);
  unsigned char magic[2] = {};
  std::size_t got = std::fread(magic, 1, 2, file.get());
  return got == 2 && magic[0] == 0xFF && magic[1] == 0xD8;
}

}  // namespace detail

// Loads a PNG or JPEG (detected by magic bytes) as float samples in [0,1].
inline Image load_image(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw IoError("file does not exist: " + path);
  if (detail::has_png_magic(path)) return detail::load_png(path);
  if (detail::has_jpeg_magic(path)) return detail::load_jpeg(path);
  throw FormatError("not a PNG or JPEG file: " + path);
}

// Saves as PNG with round-to-nearest quantization at the requested depth.
// Compression parameters are fixed so identical pixels produce identical
// bytes.
inline void save_image(const Image& img, const std::string& path,
                       int bit_depth = 8, int compression_level = 6) {
  check_arg(!img.empty(), "save_image: empty image");
  check_arg(bit_depth == 8 || bit_depth == 16,
            "save_image: bit depth must be 8 or 16");
  if (img.width > kMaxImageEdge || img.height > kMaxImageEdge)
    throw DimensionError("save_image: image dimensions exceed limit");
  if (!all_finite(img))
    throw std::invalid_argument("save_image: non-finite samples");

  detail::FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open file for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            detail::png_error_fn,
                                            detail::png_warn_fn);
  if (!png) throw IoError("png: allocation failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png: allocation failure");
  }

  try {
    png_init_io(png, file.get());
    png_set_compression_level(png, compression_level);
    int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, bit_depth, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const double peak = bit_depth == 16 ? 65535.0 : 255.0;
    std::size_t stride =
        static_cast<std::size_t>(img.width) * img.channels * (bit_depth / 8);
    std::vector<png_byte> row(stride);
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width * img.channels; ++x) {
        float v = clamp01(img.data[static_cast<std::size_t>(y) * img.width *
                                       img.channels +
                                   x]);
        unsigned q = static_cast<unsigned>(std::lround(double(v) * peak));
        if (bit_depth == 16) {
          row[2 * x] = static_cast<png_byte>(q >> 8);
          row[2 * x + 1] = static_cast<png_byte>(q & 0xFF);
        } else {
          row[x] = static_cast<png_byte>(q);
        }
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, info);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
}

}  // namespace flare
