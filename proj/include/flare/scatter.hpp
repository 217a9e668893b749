#pragma once

// Scattering-flare synthesis: a layered template made of a radial glare
// gradient (optionally dimmed in wedges around the streak axis), an
// asymmetric streak with per-edge blur derived from its section curve, a
// spiked shimmer with a radially blurred noise patch, and an overexposed
// light-source core, composed with a screen blend.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "flare/core.hpp"
#include "flare/imaging.hpp"

namespace flare {

using Rgb = std::array<double, 3>;

// Glare ------------------------------------------------------------------

// Color vs normalized distance to the light source, linearly interpolated.
// Endpoints d=0 and d=1 are required and the value at d=1 must be zero.
struct GlareCurve {
  struct Point {
    double d = 0.0;
    Rgb rgb{0, 0, 0};
  };
  std::vector<Point> points;

  void validate() const {
    check_arg(points.size() >= 2, "glare curve needs at least two points");
    check_arg(points.front().d == 0.0, "glare curve must start at d=0");
    check_arg(points.back().d == 1.0, "glare curve must end at d=1");
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (double v : points[i].rgb)
        check_arg(v >= 0.0 && v <= 1.0, "glare curve values must be in [0,1]");
      if (i > 0)
        check_arg(points[i].d > points[i - 1].d,
                  "glare curve distances must be strictly increasing");
    }
    for (double v : points.back().rgb)
      check_arg(v == 0.0, "glare curve must vanish at d=1");
  }

  Rgb eval(double d) const {
    if (d <= 0.0) return points.front().rgb;
    if (d >= 1.0) return points.back().rgb;
    std::size_t hi = 1;
    while (points[hi].d < d) ++hi;
    const Point& a = points[hi - 1];
    const Point& b = points[hi];
    double t = (d - a.d) / (b.d - a.d);
    return {a.rgb[0] + t * (b.rgb[0] - a.rgb[0]),
            a.rgb[1] + t * (b.rgb[1] - a.rgb[1]),
            a.rgb[2] + t * (b.rgb[2] - a.rgb[2])};
  }
};

struct GlareSpec {
  double radius = 0.0;            // pixels
  GlareCurve curve;
  double vanishing_angle = 0.0;   // total wedge width, radians, < pi
  double vanishing_feather = 0.0; // radians
  double streak_orientation = 0.0;
};

// Weight of the vanishing-corner mask at a given polar angle around the
// light: 0 inside each wedge of total width theta centered on the streak
// axis (both directions), rising to 1 over a cosine ramp of width feather.
inline double vanishing_corner_weight(double angle, double theta,
                                      double feather,
                                      double streak_orientation) {
  if (theta <= 0.0) return 1.0;
  auto wrap = [](double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
  };
  double d1 = std::abs(wrap(angle - streak_orientation));
  double d2 = std::abs(wrap(angle - streak_orientation - kPi));
  double dist = std::min(d1, d2);
  double half = theta * 0.5;
  if (dist <= half) return 0.0;
  if (feather <= 0.0 || dist >= half + feather) return 1.0;
  return 0.5 * (1.0 - std::cos(kPi * (dist - half) / feather));
}

inline Image apply_vanishing_corner(const Image& glare, double theta,
                                    double feather, double streak_orientation,
                                    double light_x, double light_y) {
  check_arg(theta >= 0.0, "vanishing angle must be non-negative");
  if (theta == 0.0) return glare;
  Image out = glare;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double w = vanishing_corner_weight(std::atan2(y - light_y, x - light_x),
                                         theta, feather, streak_orientation);
      if (w == 1.0) continue;
      for (int c = 0; c < out.channels; ++c)
        out.at(x, y, c) = static_cast<float>(out.at(x, y, c) * w);
    }
  return out;
}

inline Image build_glare(const GlareSpec& spec, int width, int height,
                         double light_x, double light_y) {
  spec.curve.validate();
  check_arg(spec.radius > 0.0, "glare radius must be positive");
  check_arg(spec.vanishing_angle >= 0.0 && spec.vanishing_angle < kPi,
            "vanishing angle must be in [0, pi)");
  check_arg(light_x >= 0 && light_x < width && light_y >= 0 && light_y < height,
            "light position must be inside the canvas");
  Image out(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double d = std::hypot(x - light_x, y - light_y) / spec.radius;
      if (d >= 1.0) continue;
      Rgb v = spec.curve.eval(d);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(v[c]);
    }
  return apply_vanishing_corner(out, spec.vanishing_angle,
                                spec.vanishing_feather,
                                spec.streak_orientation, light_x, light_y);
}

// Streak -------------------------------------------------------------------

// Color vs signed transverse position across the streak, in pixels,
// linearly interpolated and clamped at the ends.
struct SectionCurve {
  struct Point {
    double pos = 0.0;  // pixels, negative on side b, positive on side a
    Rgb rgb{0, 0, 0};
  };
  std::vector<Point> points;

  void validate() const {
    check_arg(points.size() >= 2, "section curve needs at least two points");
    for (std::size_t i = 1; i < points.size(); ++i)
      check_arg(points[i].pos > points[i - 1].pos,
                "section curve positions must be strictly increasing");
  }

  Rgb eval(double pos) const {
    if (pos <= points.front().pos) return points.front().rgb;
    if (pos >= points.back().pos) return points.back().rgb;
    std::size_t hi = 1;
    while (points[hi].pos < pos) ++hi;
    const Point& a = points[hi - 1];
    const Point& b = points[hi];
    double t = (pos - a.pos) / (b.pos - a.pos);
    return {a.rgb[0] + t * (b.rgb[0] - a.rgb[0]),
            a.rgb[1] + t * (b.rgb[1] - a.rgb[1]),
            a.rgb[2] + t * (b.rgb[2] - a.rgb[2])};
  }

  static double luminance(const Rgb& v) {
    return (v[0] + v[1] + v[2]) / 3.0;
  }
};

// Smallest edge blur reported; an instantaneous drop cannot be resolved
// below half a pixel.
inline constexpr double kMinEdgeBlur = 0.5;

// Distance from the curve's peak to the half-peak crossing on each side
// (side a toward +pos, side b toward -pos), used directly as that edge's
// Gaussian sigma. A side with no crossing falls back to its full extent.
inline std::pair<double, double> derive_edge_blur(const SectionCurve& curve) {
  curve.validate();
  std::size_t peak = 0;
  double peak_lum = -1.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    double lum = SectionCurve::luminance(curve.points[i].rgb);
    if (lum > peak_lum) {
      peak_lum = lum;
      peak = i;
    }
  }
  check_arg(peak > 0 && peak + 1 < curve.points.size(),
            "section curve peak must be interior");
  check_arg(peak_lum > 0.0, "section curve must have a positive peak");
  const double half = 0.5 * peak_lum;
  const double peak_pos = curve.points[peak].pos;

  auto crossing = [&](bool forward) -> double {
    double prev_pos = peak_pos;
    double prev_lum = peak_lum;
    std::size_t i = peak;
    while (true) {
      if (forward) {
        if (++i >= curve.points.size()) break;
      } else {
        if (i == 0) break;
        --i;
      }
      double lum = SectionCurve::luminance(curve.points[i].rgb);
      double pos = curve.points[i].pos;
      if (lum <= half) {
        double t = (prev_lum - half) / (prev_lum - lum);
        return std::abs(prev_pos + t * (pos - prev_pos) - peak_pos);
      }
      prev_pos = pos;
      prev_lum = lum;
    }
    // no half crossing: fall back to the side's extent
    double end_pos = forward ? curve.points.back().pos : curve.points.front().pos;
    return std::abs(end_pos - peak_pos);
  };

  double blur_a = std::max(crossing(true), kMinEdgeBlur);
  double blur_b = std::max(crossing(false), kMinEdgeBlur);
  return {blur_a, blur_b};
}

struct StreakSpec {
  double orientation = 0.0;  // radians
  double length = 0.0;       // half length in pixels, the streak spans both directions
  double width_a = 0.0;      // half width on the +transverse side
  double width_b = 0.0;
  SectionCurve section;
  double blur_a = 1.0;  // edge Gaussian sigma, side a
  double blur_b = 1.0;
};

namespace detail {
// Box edge blurred with a Gaussian of the given sigma.
inline double soft_edge(double t, double width, double sigma) {
  return 0.5 * std::erfc((t - width) / (sigma * std::sqrt(2.0)));
}
}  // namespace detail

inline Image build_streak(const StreakSpec& spec, int width, int height,
                          double light_x, double light_y) {
  check_arg(spec.length > 0.0, "streak length must be positive");
  check_arg(spec.width_a > 0.0 && spec.width_b > 0.0,
            "streak widths must be positive");
  check_arg(spec.blur_a > 0.0 && spec.blur_b > 0.0,
            "streak edge blurs must be positive");
  spec.section.validate();

  // the streak spans both directions; fold the orientation into [0, pi) so
  // a half turn yields the identical image with the same side assignment
  const double orient =
      spec.orientation - kPi * std::floor(spec.orientation / kPi);
  const double ca = std::cos(orient);
  const double sa = std::sin(orient);
  const double margin =
      std::max(spec.width_a + 4.0 * spec.blur_a,
               spec.width_b + 4.0 * spec.blur_b);
  Image out(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double dx = x - light_x;
      double dy = y - light_y;
      double u = dx * ca + dy * sa;   // longitudinal
      double v = -dx * sa + dy * ca;  // transverse, side a at v >= 0
      double au = std::abs(u);
      if (au >= spec.length || std::abs(v) > margin) continue;
      // smooth longitudinal falloff over the outer 30% of the half length
      double env = 1.0;
      double roll = 0.7 * spec.length;
      if (au > roll)
        env = 0.5 * (1.0 + std::cos(kPi * (au - roll) / (spec.length - roll)));
      double edge = v >= 0.0
                        ? detail::soft_edge(v, spec.width_a, spec.blur_a)
                        : detail::soft_edge(-v, spec.width_b, spec.blur_b);
      if (edge * env <= 0.0) continue;
      Rgb col = spec.section.eval(v);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(col[c] * edge * env);
    }
  return out;
}

// Shimmer --------------------------------------------------------------------

struct SpikeLobe {
  double amplitude = 1.0;  // in [0,1]
  double width = 0.05;     // angular Gaussian sigma, radians
};

struct ShimmerNoiseSpec {
  int octaves = 4;
  double persistence = 0.55;
  double patch_radius = 0.0;       // pixels; 0 disables the noise patch
  double radial_blur_amount = 0.5;
  double opacity = 0.0;
};

struct ShimmerSpec {
  int spike_count = 8;
  std::vector<SpikeLobe> angular_profile;  // one lobe per spike
  double radius = 0.0;                     // pixels
  double phase = 0.0;                      // rotation of the spike fan
  Rgb tint{1.0, 1.0, 1.0};
  ShimmerNoiseSpec noise;
};

inline Image build_shimmer(const ShimmerSpec& spec, int width, int height,
                           double light_x, double light_y, RngStream& rng) {
  check_arg(spec.spike_count >= 3, "shimmer needs at least 3 spikes");
  check_arg(spec.radius > 0.0, "shimmer radius must be positive");
  check_arg(spec.angular_profile.size() ==
                static_cast<std::size_t>(spec.spike_count),
            "angular profile must list one lobe per spike");

  Image out(width, height, 3);
  const double step = 2.0 * kPi / spec.spike_count;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double dx = x - light_x;
      double dy = y - light_y;
      double rho = std::hypot(dx, dy);
      if (rho >= spec.radius) continue;
      double ang = std::atan2(dy, dx);
      double s = 0.0;
      for (int j = 0; j < spec.spike_count; ++j) {
        const SpikeLobe& lobe = spec.angular_profile[j];
        if (lobe.amplitude <= 0.0) continue;
        double d = ang - (spec.phase + step * j);
        d -= 2.0 * kPi * std::floor((d + kPi) / (2.0 * kPi));
        double t = d / lobe.width;
        s += lobe.amplitude * std::exp(-0.5 * t * t);
      }
      if (s <= 0.0) continue;
      double env = 1.0 - rho / spec.radius;
      env *= env;
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(s * env * spec.tint[c]);
    }

  if (spec.noise.opacity > 0.0 && spec.noise.patch_radius > 0.0) {
    int patch = std::max(2, 2 * static_cast<int>(std::ceil(spec.noise.patch_radius)));
    Image noise = fractal_noise(patch, patch, spec.noise.octaves,
                                spec.noise.persistence, rng);
    double pc = (patch - 1) * 0.5;
    noise = radial_blur(noise, pc, pc, spec.noise.radial_blur_amount);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        double dx = x - light_x;
        double dy = y - light_y;
        double rho = std::hypot(dx, dy);
        if (rho >= spec.noise.patch_radius) continue;
        double fall = 0.5 * (1.0 + std::cos(kPi * rho / spec.noise.patch_radius));
        float n = detail::bilinear_zero(noise, pc + dx, pc + dy, 0);
        double add = spec.noise.opacity * n * fall;
        for (int c = 0; c < 3; ++c)
          out.at(x, y, c) =
              static_cast<float>(out.at(x, y, c) + add * spec.tint[c]);
      }
  }
  return out;
}

// Light source ----------------------------------------------------------------

struct SourceSpec {
  enum class Shape { Disk, Polygon };
  Shape shape = Shape::Disk;
  int sides = 6;           // for Shape::Polygon
  double rotation = 0.0;
  double core_size = 0.0;  // circumradius in pixels; core renders at 1 exactly
  double glow_radius = 0.0;
  double glow_exponent = 2.0;
  Rgb tint{1.0, 1.0, 1.0};
};

inline Image build_source(const SourceSpec& spec, int width, int height,
                          double light_x, double light_y) {
  check_arg(spec.core_size > 0.0, "source core size must be positive");
  check_arg(spec.glow_radius >= 0.0, "glow radius must be non-negative");
  check_arg(spec.glow_exponent > 0.0, "glow exponent must be positive");
  if (spec.shape == SourceSpec::Shape::Polygon)
    check_arg(spec.sides >= 3, "polygon source needs >= 3 sides");

  Image out(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double dx = x - light_x;
      double dy = y - light_y;
      double rho = std::hypot(dx, dy);
      double boundary = spec.core_size;
      if (spec.shape == SourceSpec::Shape::Polygon && rho > 0.0) {
        double phi = std::atan2(dy, dx) - spec.rotation;
        double sector = 2.0 * kPi / spec.sides;
        double a = phi - sector * std::floor(phi / sector) - sector * 0.5;
        boundary = spec.core_size * std::cos(kPi / spec.sides) / std::cos(a);
      }
      if (rho <= boundary) {
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = 1.0f;
        continue;
      }
      if (spec.glow_radius <= 0.0) continue;
      double t = (rho - boundary) / spec.glow_radius;
      if (t >= 1.0) continue;
      double glow = std::pow(1.0 - t, spec.glow_exponent);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(clamp01(
            static_cast<float>(glow * spec.tint[c])));
    }
  return out;
}

// Template -------------------------------------------------------------------

struct FlareTemplate {
  Image glare;
  Image streak;
  Image shimmer;
  Image source;
  Image composite;
  double light_x = 0.0;
  double light_y = 0.0;

  // The annotation layer that merges low- and high-frequency glare.
  Image glare_with_shimmer() const {
    Image out = glare;
    for (std::size_t i = 0; i < out.data.size(); ++i)
      out.data[i] = clamp01(out.data[i] + shimmer.data[i]);
    return out;
  }
};

// composite = screen(clip01(glare + streak + shimmer), source). Requires the
// source core to cover every glare pixel that has reached 1.0, so screen
// blending cannot grow the overexposed region beyond the light source and
// pre-saturated streak cores.
inline FlareTemplate compose_template(Image glare, Image streak, Image shimmer,
                                      Image source, double light_x,
                                      double light_y) {
  check_shape_match(glare, streak);
  check_shape_match(glare, shimmer);
  check_shape_match(glare, source);

  Image sum = glare;
  for (std::size_t i = 0; i < sum.data.size(); ++i)
    sum.data[i] = clamp01(sum.data[i] + streak.data[i] + shimmer.data[i]);

  for (std::size_t p = 0; p < glare.pixel_count(); ++p) {
    bool glare_sat = false;
    for (int c = 0; c < glare.channels; ++c)
      if (glare.data[p * glare.channels + c] >= 1.0f) glare_sat = true;
    if (!glare_sat) continue;
    for (int c = 0; c < source.channels; ++c)
      if (source.data[p * source.channels + c] < 1.0f)
        throw std::invalid_argument(
            "compose_template: light-source core does not cover the glare's "
            "overexposed pixels");
  }

  FlareTemplate tpl;
  tpl.composite = screen_blend(sum, source);
  tpl.glare = std::move(glare);
  tpl.streak = std::move(streak);
  tpl.shimmer = std::move(shimmer);
  tpl.source = std::move(source);
  tpl.light_x = light_x;
  tpl.light_y = light_y;
  return tpl;
}

}  // namespace flare
