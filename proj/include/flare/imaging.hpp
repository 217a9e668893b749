#pragma once

// Photometric and geometric primitives: sRGB transfer, gamma, affine warp,
// Gaussian blur, screen blend, fractal value noise, and radial (zoom) blur.
// All functions are pure; the working space is linear-light float and sRGB
// conversion happens only at IO boundaries.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "flare/core.hpp"

namespace flare {

inline float clamp01(float v) { return v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v); }

inline Image clip01(Image img) {
  for (float& v : img.data) v = clamp01(v);
  return img;
}

// sRGB transfer curve --------------------------------------------------

inline double srgb_decode(double s) {
  return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double l) {
  return l <= 0.0031308 ? l * 12.92 : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
}

namespace detail {
inline void check_unit_range(const Image& img, const char* op) {
  for (float v : img.data)
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw std::invalid_argument(std::string(op) +
                                  ": samples must be finite and in [0,1]");
    }
}
}  // namespace detail

inline Image srgb_to_linear(Image img) {
  detail::check_unit_range(img, "srgb_to_linear");
  for (float& v : img.data) v = static_cast<float>(srgb_decode(v));
  return img;
}

inline Image linear_to_srgb(Image img) {
  detail::check_unit_range(img, "linear_to_srgb");
  for (float& v : img.data) v = static_cast<float>(srgb_encode(v));
  return img;
}

// Per-sample power law. Callers pass gamma to linearize an encoded image and
// 1/gamma to re-encode.
inline Image apply_gamma(Image img, double gamma) {
  check_arg(gamma > 0.0, "apply_gamma: gamma must be positive");
  for (float v : img.data)
    check_arg(v >= 0.0f && std::isfinite(v),
              "apply_gamma: samples must be non-negative");
  if (gamma == 1.0) return img;
  for (float& v : img.data) v = static_cast<float>(std::pow(double(v), gamma));
  return img;
}

// Affine warp ----------------------------------------------------------

struct AffineParams {
  double rotation = 0.0;     // radians
  double translate_x = 0.0;  // pixels
  double translate_y = 0.0;
  double shear = 0.0;  // radians
  double scale = 1.0;
  bool flip_h = false;
  bool flip_v = false;
};

namespace detail {
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a b][c d]]
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
  Mat2 inverse() const {
    double det = a * d - b * c;
    check_arg(std::abs(det) > 1e-12, "warp_affine: singular transform");
    return {d / det, -b / det, -c / det, a / det};
  }
};

inline float bilinear_zero(const Image& img, double x, double y, int c) {
  if (x <= -1.0 || y <= -1.0 || x >= img.width || y >= img.height) return 0.0f;
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  double fx = x - x0;
  double fy = y - y0;
  auto tap = [&](int xi, int yi) -> double {
    if (xi < 0 || yi < 0 || xi >= img.width || yi >= img.height) return 0.0;
    return img.at(xi, yi, c);
  };
  double top = tap(x0, y0) * (1.0 - fx) + tap(x0 + 1, y0) * fx;
  double bot = tap(x0, y0 + 1) * (1.0 - fx) + tap(x0 + 1, y0 + 1) * fx;
  return static_cast<float>(top * (1.0 - fy) + bot * fy);
}
}  // namespace detail

// Composition order: flip, rotate, shear, scale, then translate, all about
// the canvas center, applied as one matrix in a single bilinear pass with
// zero padding outside the source. Output keeps the source dimensions.
inline Image warp_affine(const Image& img, const AffineParams& p) {
  check_arg(p.scale > 0.0, "warp_affine: scale must be positive");
  using detail::Mat2;
  Mat2 flip{p.flip_h ? -1.0 : 1.0, 0.0, 0.0, p.flip_v ? -1.0 : 1.0};
  Mat2 rot{std::cos(p.rotation), -std::sin(p.rotation), std::sin(p.rotation),
           std::cos(p.rotation)};
  Mat2 shear{1.0, std::tan(p.shear), 0.0, 1.0};
  Mat2 scale{p.scale, 0.0, 0.0, p.scale};
  Mat2 fwd = scale * shear * rot * flip;
  Mat2 inv = fwd.inverse();

  const double cx = (img.width - 1) * 0.5;
  const double cy = (img.height - 1) * 0.5;
  Image out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double dx = x - cx - p.translate_x;
      double dy = y - cy - p.translate_y;
      double sx = cx + inv.a * dx + inv.b * dy;
      double sy = cy + inv.c * dx + inv.d * dy;
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = detail::bilinear_zero(img, sx, sy, c);
    }
  }
  return out;
}

// Gaussian blur ---------------------------------------------------------

// Separable, kernel truncated at +-3 sigma and renormalized to unit sum,
// edge-replicate borders (constant images stay constant). sigma=0 is the
// identity.
inline Image gaussian_blur(const Image& img, double sigma) {
  check_arg(sigma >= 0.0, "gaussian_blur: sigma must be non-negative");
  if (sigma == 0.0) return img;
  int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (double(i) * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
  Image tmp(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * img.at(clampi(x + i, img.width - 1), y, c);
        tmp.at(x, y, c) = static_cast<float>(acc);
      }
  Image out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * tmp.at(x, clampi(y + i, img.height - 1), c);
        out.at(x, y, c) = static_cast<float>(acc);
      }
  return out;
}

// Screen blend ----------------------------------------------------------

// 1 - (1-a)(1-b): brightens without expanding already-saturated pixels.
// Evaluated in double so the identity and absorbing elements are exact in
// the float output.
inline Image screen_blend(const Image& a, const Image& b) {
  check_shape_match(a, b);
  detail::check_unit_range(a, "screen_blend");
  detail::check_unit_range(b, "screen_blend");
  Image out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = static_cast<float>(
        1.0 - (1.0 - double(a.data[i])) * (1.0 - double(b.data[i])));
  return out;
}

// Fractal value noise ---------------------------------------------------

namespace detail {
inline double lattice_value(std::uint64_t seed, int octave, int ix, int iy) {
  std::uint64_t h = seed;
  h = RngStream::mix(h ^ (std::uint64_t(std::uint32_t(octave)) << 42));
  h = RngStream::mix(h ^ (std::uint64_t(std::uint32_t(ix)) << 21) ^
                     std::uint64_t(std::uint32_t(iy)));
  return double(h >> 11) * 0x1.0p-53;
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }
}  // namespace detail

// Sum of `octaves` value-noise layers, frequency doubling and amplitude
// scaled by `persistence` per octave, normalized to [0,1]. The base octave
// spans 4 lattice cells across the larger dimension. Deterministic in rng:
// one draw seeds the whole patch.
inline Image fractal_noise(int width, int height, int octaves,
                           double persistence, RngStream& rng) {
  check_arg(width > 0 && height > 0, "fractal_noise: zero-sized canvas");
  check_arg(octaves >= 1, "fractal_noise: octaves must be >= 1");
  check_arg(persistence > 0.0 && persistence <= 1.0,
            "fractal_noise: persistence must be in (0,1]");
  const std::uint64_t seed = rng.next_u64();
  const double extent = std::max(width, height);

  Image out(width, height, 1);
  double total_amp = 0.0;
  double amp = 1.0;
  for (int o = 0; o < octaves; ++o) {
    total_amp += amp;
    amp *= persistence;
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      amp = 1.0;
      for (int o = 0; o < octaves; ++o) {
        double cells = 4.0 * double(1 << o);
        double gx = (x + 0.5) / extent * cells;
        double gy = (y + 0.5) / extent * cells;
        int ix = static_cast<int>(std::floor(gx));
        int iy = static_cast<int>(std::floor(gy));
        double tx = detail::smoothstep(gx - ix);
        double ty = detail::smoothstep(gy - iy);
        double v00 = detail::lattice_value(seed, o, ix, iy);
        double v10 = detail::lattice_value(seed, o, ix + 1, iy);
        double v01 = detail::lattice_value(seed, o, ix, iy + 1);
        double v11 = detail::lattice_value(seed, o, ix + 1, iy + 1);
        double v = (v00 * (1 - tx) + v10 * tx) * (1 - ty) +
                   (v01 * (1 - tx) + v11 * tx) * ty;
        acc += amp * v;
        amp *= persistence;
      }
      out.at(x, y) = static_cast<float>(acc / total_amp);
    }
  }
  return out;
}

// Radial (zoom) blur ----------------------------------------------------

// Averages each pixel along its ray toward `center` over a path covering
// min(amount,1) of the pixel-to-center distance. amount=0 is the identity.
inline Image radial_blur(const Image& img, double center_x, double center_y,
                         double amount) {
  check_arg(amount >= 0.0, "radial_blur: amount must be non-negative");
  if (amount == 0.0) return img;
  const double frac = std::min(amount, 1.0);
  Image out(img.width, img.height, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double dx = center_x - x;
      double dy = center_y - y;
      double dist = std::sqrt(dx * dx + dy * dy);
      int n = std::clamp(static_cast<int>(std::ceil(frac * dist)), 1, 96) + 1;
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          double s = frac * double(k) / double(n - 1);
          acc += detail::bilinear_zero(img, x + dx * s, y + dy * s, c);
        }
        out.at(x, y, c) = static_cast<float>(acc / n);
      }
    }
  }
  return out;
}

// Resampling helpers ----------------------------------------------------

inline Image resize_bilinear(const Image& img, int new_w, int new_h) {
  check_arg(new_w > 0 && new_h > 0, "resize_bilinear: bad target size");
  if (new_w == img.width && new_h == img.height) return img;
  Image out(new_w, new_h, img.channels);
  double sx = double(img.width) / new_w;
  double sy = double(img.height) / new_h;
  for (int y = 0; y < new_h; ++y)
    for (int x = 0; x < new_w; ++x) {
      double u = (x + 0.5) * sx - 0.5;
      double v = (y + 0.5) * sy - 0.5;
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = detail::bilinear_zero(img, u, v, c);
    }
  return out;
}

inline Image center_crop(const Image& img, int crop_w, int crop_h) {
  check_arg(crop_w > 0 && crop_h > 0 && crop_w <= img.width &&
                crop_h <= img.height,
            "center_crop: crop exceeds image");
  int x0 = (img.width - crop_w) / 2;
  int y0 = (img.height - crop_h) / 2;
  Image out(crop_w, crop_h, img.channels);
  for (int y = 0; y < crop_h; ++y)
    for (int x = 0; x < crop_w; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
  return out;
}

inline Image to_gray(const Image& img) {
  if (img.channels == 1) return img;
  Image out(img.width, img.height, 1);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const float* px = &img.data[p * 3];
    out.data[p] = 0.299f * px[0] + 0.587f * px[1] + 0.114f * px[2];
  }
  return out;
}

}  // namespace flare
