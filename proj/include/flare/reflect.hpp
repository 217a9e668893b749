#pragma once

// Reflective-flare (ghosting) rendering: a chain of iris patches on the line
// through the optical center, each at position center + t * (center - light),
// with distance-triggered crescent clipping and distance-proportional
// caustics opacity. Iris patches are procedural polygon disks with soft rims.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "flare/core.hpp"
#include "flare/imaging.hpp"
#include "flare/scatter.hpp"  // Rgb

namespace flare {

struct Iris {
  Image patch;          // single-channel intensity, centered, premultiplied
  double t = 0.0;       // signed line-position parameter
  double scale = 1.0;
  Rgb tint{1.0, 1.0, 1.0};
};

// Radially non-increasing soft-disk erasure mask. Keeping the profile radial
// makes the swept-union erasure below exact, which is what guarantees the
// monotone-energy clipping law.
struct ClipMaskSpec {
  double radius = 0.0;   // pixels
  double feather = 0.0;  // pixels

  double alpha(double r) const {
    if (r >= radius) return 0.0;
    if (feather <= 0.0 || r <= radius - feather) return 1.0;
    return 0.5 * (1.0 + std::cos(kPi * (r - (radius - feather)) / feather));
  }
};

struct CausticsSpec {
  Image pattern;          // single-channel, centered; empty disables caustics
  double gain = 0.0;      // opacity per pixel of iris-light distance
  double max_opacity = 0.0;
  double scale = 1.0;     // pattern size relative to the iris patch
};

struct IrisChain {
  std::vector<Iris> irises;
  double center_x = 0.0;  // optical center, canvas pixels
  double center_y = 0.0;
  double clip_threshold = 0.0;  // light-center distance where clipping starts
  ClipMaskSpec clip_mask;
  CausticsSpec caustics;
};

struct PlacedIris {
  const Iris* iris = nullptr;
  double x = 0.0;
  double y = 0.0;
};

// position_i = optical_center + t_i * (optical_center - light_pos); moving
// the light by delta moves iris i by -t_i * delta.
inline std::vector<PlacedIris> place_irises(const IrisChain& chain,
                                            double light_x, double light_y) {
  std::vector<PlacedIris> placed;
  placed.reserve(chain.irises.size());
  for (const auto& iris : chain.irises) {
    placed.push_back({&iris,
                      chain.center_x + iris.t * (chain.center_x - light_x),
                      chain.center_y + iris.t * (chain.center_y - light_y)});
  }
  return placed;
}

inline double caustics_opacity(double iris_light_dist,
                               const CausticsSpec& caustics) {
  check_arg(iris_light_dist >= 0.0, "caustics distance must be non-negative");
  check_arg(caustics.max_opacity >= 0.0 && caustics.max_opacity <= 1.0,
            "caustics max opacity must be in [0,1]");
  return std::min(caustics.max_opacity, caustics.gain * iris_light_dist);
}

namespace detail {
inline double dist_to_segment(double px, double py, double ax, double ay,
                              double bx, double by) {
  double vx = bx - ax, vy = by - ay;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0
                 ? std::clamp(((px - ax) * vx + (py - ay) * vy) / len2, 0.0, 1.0)
                 : 0.0;
  return std::hypot(px - (ax + t * vx), py - (ay + t * vy));
}
}  // namespace detail

// Erases a growing crescent from an iris image once the light-to-center
// distance exceeds the chain's clipping threshold. The erasure mask slides
// in from the outward side of the iris, one pixel per pixel of excess
// distance; the swept region is accumulated (distance to the swept segment),
// so the remaining energy is non-increasing in light_dist.
inline Image clip_iris(const Image& iris_img, double iris_x, double iris_y,
                       double light_dist, const IrisChain& chain) {
  check_arg(light_dist >= 0.0, "light distance must be non-negative");
  check_arg(chain.clip_threshold > 0.0, "clip threshold must be positive");
  if (light_dist <= chain.clip_threshold || chain.clip_mask.radius <= 0.0)
    return iris_img;

  double ux = iris_x - chain.center_x;
  double uy = iris_y - chain.center_y;
  double norm = std::hypot(ux, uy);
  if (norm == 0.0) {
    ux = 1.0;
    uy = 0.0;
  } else {
    ux /= norm;
    uy /= norm;
  }

  const double cx = (iris_img.width - 1) * 0.5;
  const double cy = (iris_img.height - 1) * 0.5;
  const double half_diag = 0.5 * std::hypot(iris_img.width, iris_img.height);
  const double start = half_diag + chain.clip_mask.radius;
  const double excess = light_dist - chain.clip_threshold;
  const double ax = cx + ux * start, ay = cy + uy * start;
  const double bx = ax - ux * excess, by = ay - uy * excess;

  Image out = iris_img;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double r = detail::dist_to_segment(x, y, ax, ay, bx, by);
      double a = chain.clip_mask.alpha(r);
      if (a <= 0.0) continue;
      for (int c = 0; c < out.channels; ++c)
        out.at(x, y, c) = static_cast<float>(out.at(x, y, c) * (1.0 - a));
    }
  return out;
}

// Procedural iris patches -----------------------------------------------------

// Polygon disk with a soft rim and an optional bright ring highlight,
// normalized to peak 1. sides = 0 renders a plain disk.
inline Image render_iris_patch(int sides, double radius, double softness,
                               double ring_strength = 0.0) {
  check_arg(radius > 0.0, "iris radius must be positive");
  check_arg(softness > 0.0 && softness <= 1.0, "softness must be in (0,1]");
  check_arg(sides == 0 || sides >= 3, "iris needs 0 (disk) or >= 3 sides");
  int half = static_cast<int>(std::ceil(radius + 2.0));
  int size = 2 * half + 1;
  Image patch(size, size, 1);
  const double soft = std::max(1.0, softness * radius);
  double peak = 0.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double dx = x - half, dy = y - half;
      double rho = std::hypot(dx, dy);
      double boundary = radius;
      if (sides >= 3 && rho > 0.0) {
        double phi = std::atan2(dy, dx);
        double sector = 2.0 * kPi / sides;
        double a = phi - sector * std::floor(phi / sector) - sector * 0.5;
        boundary = radius * std::cos(kPi / sides) / std::cos(a);
      }
      double fill = std::clamp((boundary - rho) / soft + 0.5, 0.0, 1.0);
      if (fill <= 0.0) continue;
      double v = fill;
      if (ring_strength > 0.0) {
        double rim = (rho - 0.82 * boundary) / (0.08 * boundary + 1.0);
        v += ring_strength * fill * std::exp(-rim * rim);
      }
      patch.at(x, y) = static_cast<float>(v);
      peak = std::max(peak, v);
    }
  if (peak > 0.0)
    for (float& v : patch.data) v = static_cast<float>(v / peak);
  return patch;
}

struct MatrixLightSpec {
  int rows = 1;
  int cols = 1;
  double cell_size = 8.0;  // pixels
  double cell_gap = 4.0;
  enum class CellShape { Disk, Square };
  CellShape cell_shape = CellShape::Disk;
};

// Lattice-shaped iris for matrix LED lights: rows x cols identical cells
// with uniform gaps, peak-normalized.
inline Iris render_lattice_iris(const MatrixLightSpec& spec) {
  check_arg(spec.rows >= 1 && spec.cols >= 1, "lattice needs rows, cols >= 1");
  check_arg(spec.cell_size > 0.0 && spec.cell_gap >= 0.0,
            "lattice cell size must be positive");
  const double pitch = spec.cell_size + spec.cell_gap;
  const double pad = spec.cell_size;
  int w = static_cast<int>(std::ceil(spec.cols * pitch - spec.cell_gap + 2 * pad));
  int h = static_cast<int>(std::ceil(spec.rows * pitch - spec.cell_gap + 2 * pad));
  w += (w % 2 == 0) ? 1 : 0;  // odd size keeps the lattice centered
  h += (h % 2 == 0) ? 1 : 0;
  Image patch(w, h, 1);
  const double cx = (w - 1) * 0.5;
  const double cy = (h - 1) * 0.5;
  const double half_r = spec.cell_size * 0.5;
  const double x0 = cx - 0.5 * (spec.cols - 1) * pitch;
  const double y0 = cy - 0.5 * (spec.rows - 1) * pitch;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double best = 0.0;
      for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c) {
          double dx = x - (x0 + c * pitch);
          double dy = y - (y0 + r * pitch);
          double d;
          if (spec.cell_shape == MatrixLightSpec::CellShape::Disk)
            d = std::hypot(dx, dy);
          else
            d = std::max(std::abs(dx), std::abs(dy));
          best = std::max(best, std::clamp(half_r - d + 0.5, 0.0, 1.0));
        }
      patch.at(x, y) = static_cast<float>(best);
    }
  Iris iris;
  iris.patch = std::move(patch);
  return iris;
}

// Rendering --------------------------------------------------------------------

namespace detail {
inline void splat_add(Image& canvas, const Image& patch, double pos_x,
                      double pos_y, double scale, const Rgb& tint,
                      double gain = 1.0) {
  const double pcx = (patch.width - 1) * 0.5;
  const double pcy = (patch.height - 1) * 0.5;
  const double half_w = pcx * scale, half_h = pcy * scale;
  int x_lo = std::max(0, static_cast<int>(std::floor(pos_x - half_w)));
  int x_hi = std::min(canvas.width - 1,
                      static_cast<int>(std::ceil(pos_x + half_w)));
  int y_lo = std::max(0, static_cast<int>(std::floor(pos_y - half_h)));
  int y_hi = std::min(canvas.height - 1,
                      static_cast<int>(std::ceil(pos_y + half_h)));
  for (int y = y_lo; y <= y_hi; ++y)
    for (int x = x_lo; x <= x_hi; ++x) {
      double sx = pcx + (x - pos_x) / scale;
      double sy = pcy + (y - pos_y) / scale;
      float v = bilinear_zero(patch, sx, sy, 0);
      if (v == 0.0f) continue;
      for (int c = 0; c < 3; ++c)
        canvas.at(x, y, c) =
            static_cast<float>(canvas.at(x, y, c) + gain * v * tint[c]);
    }
}
}  // namespace detail

// Additive composition of all placed, tinted, scaled, clipped irises plus
// per-iris caustics, before the final clip.
inline Image render_reflective_linear(const IrisChain& chain, double light_x,
                                      double light_y, int width, int height) {
  Image canvas(width, height, 3);
  const double light_dist =
      std::hypot(light_x - chain.center_x, light_y - chain.center_y);
  for (const auto& placed : place_irises(chain, light_x, light_y)) {
    const Iris& iris = *placed.iris;
    check_arg(iris.scale > 0.0, "iris scale must be positive");
    check_arg(iris.patch.channels == 1, "iris patches are single-channel");
    Image patch = iris.patch;
    if (chain.clip_threshold > 0.0 && light_dist > chain.clip_threshold)
      patch = clip_iris(patch, placed.x, placed.y, light_dist, chain);
    detail::splat_add(canvas, patch, placed.x, placed.y, iris.scale, iris.tint);

    if (!chain.caustics.pattern.empty() && chain.caustics.gain > 0.0) {
      double d = std::hypot(placed.x - light_x, placed.y - light_y);
      double opacity = caustics_opacity(d, chain.caustics);
      if (opacity > 0.0) {
        double cscale = chain.caustics.scale * iris.scale *
                        double(iris.patch.width) /
                        double(chain.caustics.pattern.width);
        detail::splat_add(canvas, chain.caustics.pattern, placed.x, placed.y,
                          cscale, iris.tint, opacity);
      }
    }
  }
  return canvas;
}

inline Image render_reflective(const IrisChain& chain, double light_x,
                               double light_y, int width, int height) {
  return clip01(render_reflective_linear(chain, light_x, light_y, width,
                                         height));
}

// Interference-like ring texture used as the caustics pattern.
inline Image render_caustics_pattern(int size, double rings,
                                     std::uint64_t seed) {
  check_arg(size >= 8, "caustics pattern needs size >= 8");
  check_arg(rings > 0.0, "caustics needs a positive ring count");
  Image out(size, size, 1);
  const double c = (size - 1) * 0.5;
  RngStream rng{seed};
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  const int arms = 3 + static_cast<int>(rng.next_u64() % 4);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double dx = x - c, dy = y - c;
      double rho = std::hypot(dx, dy) / c;
      if (rho >= 1.0) continue;
      double ang = std::atan2(dy, dx);
      double wave = 0.5 + 0.5 * std::cos(2.0 * kPi * rings * rho * rho + phase);
      double spokes = 0.75 + 0.25 * std::cos(arms * ang);
      double env = 1.0 - rho * rho;
      out.at(x, y) = static_cast<float>(wave * spokes * env);
    }
  return out;
}

}  // namespace flare
