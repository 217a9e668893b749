#pragma once

// Wave-optics PSF engine: aperture rasterization (clear pupil, polygon stop,
// opaque dirt), the paraxial pupil function of a point source, FFT-based
// PSFs, spectral mixing over a lamp band, the component-sum approximation,
// and square-root tonemapping for display.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "flare/core.hpp"
#include "flare/fft.hpp"
#include "flare/imaging.hpp"

namespace flare {

// Geometry of the sampled aperture plane. Sample index i maps to the
// physical coordinate (i - size/2) * pitch, so the optical axis pierces
// sample (size/2, size/2).
struct GridGeometry {
  int size = 1024;      // samples per side, power of two
  double pitch = 0.0;   // meters per sample

  double coord(int i) const { return (i - size / 2) * pitch; }
  double half_extent() const { return (size / 2) * pitch; }
};

// Pitch such that a pupil of radius r spans a quarter of the grid.
inline double default_pitch(double clear_radius, int grid_size) {
  return 8.0 * clear_radius / double(grid_size);
}

// Aperture model --------------------------------------------------------

struct DirtPrimitive {
  enum class Kind { Disk, Segment, Grating };
  Kind kind = Kind::Disk;
  // Disk
  double center_x = 0.0, center_y = 0.0, radius = 0.0;
  // Segment
  double p0_x = 0.0, p0_y = 0.0, p1_x = 0.0, p1_y = 0.0, width = 0.0;
  // Grating
  double orientation = 0.0;  // direction of the stripe lines, radians
  double period = 0.0;
  double duty = 0.5;         // opaque fraction of each period
  double extent = 0.0;       // radius of the patch covered by the grating

  static DirtPrimitive disk(double cx, double cy, double r) {
    DirtPrimitive d;
    d.kind = Kind::Disk;
    d.center_x = cx;
    d.center_y = cy;
    d.radius = r;
    check_arg(r > 0.0, "dirt disk radius must be positive");
    return d;
  }
  static DirtPrimitive segment(double x0, double y0, double x1, double y1,
                               double w) {
    DirtPrimitive d;
    d.kind = Kind::Segment;
    d.p0_x = x0;
    d.p0_y = y0;
    d.p1_x = x1;
    d.p1_y = y1;
    d.width = w;
    check_arg(w > 0.0, "dirt segment width must be positive");
    return d;
  }
  static DirtPrimitive grating(double orient, double period_, double duty_,
                               double extent_) {
    DirtPrimitive d;
    d.kind = Kind::Grating;
    d.orientation = orient;
    d.period = period_;
    d.duty = duty_;
    d.extent = extent_;
    check_arg(period_ > 0.0 && extent_ > 0.0,
              "grating period and extent must be positive");
    check_arg(duty_ > 0.0 && duty_ < 1.0, "grating duty must be in (0,1)");
    return d;
  }

  // True where this primitive blocks light.
  bool opaque_at(double x, double y) const {
    switch (kind) {
      case Kind::Disk: {
        double dx = x - center_x, dy = y - center_y;
        return dx * dx + dy * dy < radius * radius;
      }
      case Kind::Segment: {
        double vx = p1_x - p0_x, vy = p1_y - p0_y;
        double len2 = vx * vx + vy * vy;
        double t = len2 > 0.0
                       ? std::clamp(((x - p0_x) * vx + (y - p0_y) * vy) / len2,
                                    0.0, 1.0)
                       : 0.0;
        double dx = x - (p0_x + t * vx), dy = y - (p0_y + t * vy);
        return dx * dx + dy * dy < 0.25 * width * width;
      }
      case Kind::Grating: {
        if (x * x + y * y > extent * extent) return false;
        double u = x * std::cos(orientation) + y * std::sin(orientation);
        double frac = u / period - std::floor(u / period);
        return frac < duty;
      }
    }
    return false;
  }
};

struct PolygonStop {
  int sides = 6;
  double rotation = 0.0;  // radians
};

struct ApertureSpec {
  double clear_radius = 0.0;  // meters
  std::optional<PolygonStop> polygon;
  std::vector<DirtPrimitive> dirt;
};

namespace detail {
// Inside test for a regular polygon with circumradius R.
inline bool inside_polygon(double x, double y, int sides, double rotation,
                           double circumradius) {
  double rho = std::sqrt(x * x + y * y);
  if (rho == 0.0) return true;
  double phi = std::atan2(y, x) - rotation;
  double sector = 2.0 * kPi / sides;
  double a = phi - sector * std::floor(phi / sector) - sector * 0.5;
  double boundary = circumradius * std::cos(kPi / sides) / std::cos(a);
  return rho <= boundary;
}
}  // namespace detail

// Binary transmission mask: 1 inside the clear pupil (circle intersected
// with the optional polygon stop) and outside every dirt primitive.
inline Image rasterize_aperture(const ApertureSpec& spec,
                                const GridGeometry& grid) {
  check_arg(spec.clear_radius > 0.0, "clear_radius must be positive");
  check_arg(is_power_of_two(grid.size), "grid size must be a power of two");
  check_arg(grid.pitch > 0.0, "grid pitch must be positive");
  if (spec.polygon) check_arg(spec.polygon->sides >= 3, "polygon needs >= 3 sides");
  if (spec.clear_radius * 1.1 > grid.half_extent())
    throw std::invalid_argument(
        "rasterize_aperture: aperture exceeds grid (needs >= 10% margin)");

  Image mask(grid.size, grid.size, 1);
  const double r2 = spec.clear_radius * spec.clear_radius;
  for (int iy = 0; iy < grid.size; ++iy) {
    double y = grid.coord(iy);
    for (int ix = 0; ix < grid.size; ++ix) {
      double x = grid.coord(ix);
      bool open = x * x + y * y < r2;
      if (open && spec.polygon)
        open = detail::inside_polygon(x, y, spec.polygon->sides,
                                      spec.polygon->rotation,
                                      spec.clear_radius);
      if (open)
        for (const auto& d : spec.dirt)
          if (d.opaque_at(x, y)) {
            open = false;
            break;
          }
      mask.at(ix, iy) = open ? 1.0f : 0.0f;
    }
  }
  return mask;
}

// Optical configuration --------------------------------------------------

struct OpticalSetup {
  double focal_length = 0.05;  // meters
  double source_x = 0.0;       // meters, on the object plane
  double source_y = 0.0;
  double source_z = 10.0;      // z0 > 0, distance to the aperture plane
  double amplitude = 1.0;      // A0
  double image_distance = 0.0; // z1

  // Configures z1 from the thin-lens equation.
  static OpticalSetup in_focus(double focal_length, double z0,
                               double source_x = 0.0, double source_y = 0.0,
                               double amplitude = 1.0) {
    check_arg(focal_length > 0.0 && z0 > 0.0 && z0 > focal_length,
              "in_focus requires z0 > f > 0");
    OpticalSetup s;
    s.focal_length = focal_length;
    s.source_z = z0;
    s.source_x = source_x;
    s.source_y = source_y;
    s.amplitude = amplitude;
    s.image_distance = 1.0 / (1.0 / focal_length - 1.0 / z0);
    return s;
  }

  bool is_in_focus(double rel_tol = 1e-9) const {
    if (image_distance <= 0.0) return false;
    double lhs = 1.0 / source_z + 1.0 / image_distance;
    double rhs = 1.0 / focal_length;
    return std::abs(lhs - rhs) <= rel_tol * std::abs(rhs);
  }

  // Paraxial validity over an aperture plane of the given half extent
  // (grid corner), per rho0, rho << z0.
  bool paraxial_valid(double aperture_half_extent) const {
    double rho0 = std::hypot(source_x, source_y);
    double rho = aperture_half_extent * std::sqrt(2.0);
    return std::max(rho0, rho) / source_z < 0.1;
  }

  double source_range() const {  // r0, exact form
    return std::sqrt(source_x * source_x + source_y * source_y +
                     source_z * source_z);
  }
};

// Complex amplitude sampled on the aperture plane.
struct ComplexField {
  int size = 0;
  double pitch = 0.0;
  std::vector<Complex> data;

  Complex& at(int x, int y) { return data[std::size_t(y) * size + x]; }
  Complex at(int x, int y) const { return data[std::size_t(y) * size + x]; }
};

// Pupil function of a point source behind an ideal thin lens:
//   P(x,y) = (A0/z0) exp(i k r0) M(x,y)
//            exp(i k (x^2+y^2)(1/(2 z0) - 1/(2 f)))
//            exp(-i k (x x0 + y y0)/z0).
// The magnitude is (A0/z0) times the mask; all other factors are phase.
inline ComplexField pupil_function(const Image& mask, double pitch,
                                   const OpticalSetup& setup,
                                   double lambda_nm) {
  check_arg(lambda_nm > 0.0, "pupil_function: wavelength must be positive");
  check_arg(mask.channels == 1 && mask.width == mask.height,
            "pupil_function: mask must be a square single-channel image");
  check_arg(pitch > 0.0, "pupil_function: pitch must be positive");
  check_arg(setup.source_z > 0.0, "pupil_function: source_z must be positive");
  GridGeometry grid{mask.width, pitch};
  if (!setup.paraxial_valid(grid.half_extent()))
    throw std::invalid_argument(
        "pupil_function: setup violates the paraxial approximation");

  const double k = 2.0 * kPi / (lambda_nm * 1e-9);
  const double quad = 1.0 / (2.0 * setup.source_z) -
                      1.0 / (2.0 * setup.focal_length);
  const double mag = setup.amplitude / setup.source_z;
  const double phase0 = k * setup.source_range();

  ComplexField field;
  field.size = mask.width;
  field.pitch = pitch;
  field.data.resize(std::size_t(mask.width) * mask.height);
  for (int iy = 0; iy < mask.height; ++iy) {
    double y = grid.coord(iy);
    for (int ix = 0; ix < mask.width; ++ix) {
      double m = mask.at(ix, iy);
      if (m == 0.0f) {
        field.at(ix, iy) = Complex(0.0, 0.0);
        continue;
      }
      double x = grid.coord(ix);
      double phase = phase0 + k * (x * x + y * y) * quad -
                     k * (x * setup.source_x + y * setup.source_y) /
                         setup.source_z;
      field.at(ix, iy) =
          mag * double(m) * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return field;
}

// Multiplies in the quadratic phase of the paraxial propagation kernel to
// the in-focus image plane, exp(+i k (x^2+y^2)/(2 z1)). For an in-focus
// setup this cancels the pupil's quadratic term, leaving mask * tilt, whose
// transform is the focused image field; residual defocus survives as a
// residual quadratic phase.
inline ComplexField propagate_to_image(ComplexField field,
                                       const OpticalSetup& setup,
                                       double lambda_nm) {
  check_arg(lambda_nm > 0.0, "propagate_to_image: bad wavelength");
  check_arg(setup.image_distance > 0.0,
            "propagate_to_image: image_distance must be positive");
  const double k = 2.0 * kPi / (lambda_nm * 1e-9);
  GridGeometry grid{field.size, field.pitch};
  for (int iy = 0; iy < field.size; ++iy) {
    double y = grid.coord(iy);
    for (int ix = 0; ix < field.size; ++ix) {
      double x = grid.coord(ix);
      double phase = k * (x * x + y * y) / (2.0 * setup.image_distance);
      field.at(ix, iy) *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  return field;
}

// PSF ---------------------------------------------------------------------

enum class PsfNormalization { PeakNormalized, EnergyPreserving };

struct PsfImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;
  PsfNormalization norm = PsfNormalization::EnergyPreserving;

  double& at(int x, int y, int c = 0) {
    return data[(std::size_t(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return data[(std::size_t(y) * width + x) * channels + c];
  }
  double peak() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, v);
    return m;
  }
  double total() const {
    double s = 0.0;
    for (double v : data) s += v;
    return s;
  }
};

// Squared modulus of the centered unitary transform of the field. Total PSF
// energy equals total field energy (Parseval).
inline PsfImage psf_from_pupil(const ComplexField& field) {
  check_arg(field.size > 0 && is_power_of_two(field.size),
            "psf_from_pupil: field size must be a power of two");
  check_arg(field.data.size() == std::size_t(field.size) * field.size,
            "psf_from_pupil: field size mismatch");
  std::vector<Complex> spectrum = field.data;
  centered_dft2d(spectrum, field.size, field.size);
  PsfImage psf;
  psf.width = psf.height = field.size;
  psf.channels = 1;
  psf.norm = PsfNormalization::EnergyPreserving;
  psf.data.resize(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    psf.data[i] = std::norm(spectrum[i]);
  return psf;
}

inline PsfImage psf_from_mask(const Image& mask) {
  ComplexField field;
  field.size = mask.width;
  field.pitch = 1.0;
  field.data.resize(mask.sample_count());
  for (std::size_t i = 0; i < mask.data.size(); ++i)
    field.data[i] = Complex(mask.data[i], 0.0);
  return psf_from_pupil(field);
}

// Spectral mixing ----------------------------------------------------------

struct SpectralSample {
  double lambda_nm = 0.0;
  double weight = 0.0;
};

struct Spectrum {
  std::vector<SpectralSample> samples;

  static Spectrum from_samples(std::vector<SpectralSample> s) {
    check_arg(!s.empty(), "spectrum must not be empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      check_arg(s[i].lambda_nm > 0.0, "wavelengths must be positive");
      check_arg(s[i].weight >= 0.0, "spectral weights must be non-negative");
      if (i > 0)
        check_arg(s[i].lambda_nm > s[i - 1].lambda_nm,
                  "wavelengths must be strictly increasing");
      sum += s[i].weight;
    }
    check_arg(sum > 0.0, "spectral weights must not all be zero");
    for (auto& e : s) e.weight /= sum;
    Spectrum out;
    out.samples = std::move(s);
    return out;
  }
};

// High-pressure sodium lamp band, sampled uniformly on 560..630 nm.
inline Spectrum default_hps_spectrum(int samples = 8) {
  check_arg(samples >= 1, "spectrum needs at least one sample");
  std::vector<SpectralSample> s;
  for (int i = 0; i < samples; ++i) {
    double t = samples == 1 ? 0.5 : double(i) / (samples - 1);
    s.push_back({560.0 + 70.0 * t, 1.0});
  }
  return Spectrum::from_samples(std::move(s));
}

namespace detail {
inline double lobe(double x, double mu, double s1, double s2) {
  double t = (x - mu) / (x < mu ? s1 : s2);
  return std::exp(-0.5 * t * t);
}
}  // namespace detail

// Linear-sRGB tint of a monochromatic wavelength: piecewise-Gaussian fit of
// the 1931 standard-observer matching functions followed by the XYZ ->
// linear sRGB matrix, negatives clamped.
inline std::array<double, 3> wavelength_to_rgb(double lambda_nm) {
  double xbar = 1.056 * detail::lobe(lambda_nm, 599.8, 37.9, 31.0) +
                0.362 * detail::lobe(lambda_nm, 442.0, 16.0, 26.7) -
                0.065 * detail::lobe(lambda_nm, 501.1, 20.4, 26.2);
  double ybar = 0.821 * detail::lobe(lambda_nm, 568.8, 46.9, 40.5) +
                0.286 * detail::lobe(lambda_nm, 530.9, 16.3, 31.1);
  double zbar = 1.217 * detail::lobe(lambda_nm, 437.0, 11.8, 36.0) +
                0.681 * detail::lobe(lambda_nm, 459.0, 26.0, 13.8);
  double r = 3.2406 * xbar - 1.5372 * ybar - 0.4986 * zbar;
  double g = -0.9689 * xbar + 1.8758 * ybar + 0.0415 * zbar;
  double b = 0.0557 * xbar - 0.2040 * ybar + 1.0570 * zbar;
  return {std::max(r, 0.0), std::max(g, 0.0), std::max(b, 0.0)};
}

// Bilinear rescale of a single-channel PSF about the grid center.
inline PsfImage rescale_psf(const PsfImage& psf, double factor) {
  check_arg(psf.channels == 1, "rescale_psf expects a single channel");
  check_arg(factor > 0.0, "rescale_psf: factor must be positive");
  if (factor == 1.0) return psf;
  PsfImage out = psf;
  const double cx = psf.width / 2, cy = psf.height / 2;
  for (int y = 0; y < psf.height; ++y)
    for (int x = 0; x < psf.width; ++x) {
      double sx = cx + (x - cx) / factor;
      double sy = cy + (y - cy) / factor;
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      double fx = sx - x0, fy = sy - y0;
      auto tap = [&](int xi, int yi) -> double {
        if (xi < 0 || yi < 0 || xi >= psf.width || yi >= psf.height) return 0.0;
        return psf.at(xi, yi);
      };
      out.at(x, y) = (tap(x0, y0) * (1 - fx) + tap(x0 + 1, y0) * fx) * (1 - fy) +
                     (tap(x0, y0 + 1) * (1 - fx) + tap(x0 + 1, y0 + 1) * fx) * fy;
    }
  return out;
}

// Reference wavelength that pins the image-plane pixel pitch; the PSF of
// wavelength lambda is magnified by lambda/kPsfLambdaRefNm. A fixed
// reference keeps spectral mixing linear in the weights.
inline constexpr double kPsfLambdaRefNm = 560.0;

// Weighted RGB sum of per-wavelength PSFs. Each monochromatic PSF is the
// focused-image transform of the aperture; because the image-plane scale of
// a fixed frequency bin grows with wavelength, each PSF is rescaled by
// lambda/kPsfLambdaRefNm before mixing so all wavelengths share one pixel
// grid.
inline PsfImage spectral_psf(
    const ApertureSpec& spec, const GridGeometry& grid,
    const OpticalSetup& setup, const Spectrum& spectrum,
    PsfNormalization norm = PsfNormalization::PeakNormalized) {
  check_arg(!spectrum.samples.empty(), "spectral_psf: empty spectrum");
  Image mask = rasterize_aperture(spec, grid);
  const double lambda_ref = kPsfLambdaRefNm;

  PsfImage out;
  out.width = out.height = grid.size;
  out.channels = 3;
  out.norm = PsfNormalization::EnergyPreserving;
  out.data.assign(std::size_t(grid.size) * grid.size * 3, 0.0);

  for (const auto& sample : spectrum.samples) {
    ComplexField pupil = pupil_function(mask, grid.pitch, setup,
                                        sample.lambda_nm);
    pupil = propagate_to_image(std::move(pupil), setup, sample.lambda_nm);
    PsfImage mono = psf_from_pupil(pupil);
    mono = rescale_psf(mono, sample.lambda_nm / lambda_ref);
    auto rgb = wavelength_to_rgb(sample.lambda_nm);
    for (std::size_t p = 0; p < mono.data.size(); ++p) {
      double v = sample.weight * mono.data[p];
      out.data[p * 3 + 0] += v * rgb[0];
      out.data[p * 3 + 1] += v * rgb[1];
      out.data[p * 3 + 2] += v * rgb[2];
    }
  }

  if (norm == PsfNormalization::PeakNormalized) {
    double peak = out.peak();
    check_arg(peak > 0.0, "spectral_psf: empty aperture produced a zero PSF");
    for (double& v : out.data) v /= peak;
    out.norm = PsfNormalization::PeakNormalized;
  }
  return out;
}

// Component-sum approximation ----------------------------------------------

struct ApproximationReport {
  double exclusion_radius = 5.0;   // pixels around the PSF center
  double inside_error = 0.0;       // relative L2, component sum vs exact
  double outside_error = 0.0;
  double clean_inside_error = 0.0;  // baseline: clear pupil alone vs exact
  double clean_outside_error = 0.0;
};

namespace detail {
inline void split_l2(const PsfImage& a, const PsfImage& b, double radius,
                     double* err_in, double* err_out) {
  const double cx = a.width / 2, cy = a.height / 2;
  double num_in = 0, num_out = 0, den_in = 0, den_out = 0;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x) {
      double d = std::hypot(x - cx, y - cy);
      double diff = a.at(x, y) - b.at(x, y);
      if (d <= radius) {
        num_in += diff * diff;
        den_in += b.at(x, y) * b.at(x, y);
      } else {
        num_out += diff * diff;
        den_out += b.at(x, y) * b.at(x, y);
      }
    }
  *err_in = den_in > 0 ? std::sqrt(num_in / den_in) : 0.0;
  *err_out = den_out > 0 ? std::sqrt(num_out / den_out) : 0.0;
}
}  // namespace detail

// |F{base} + sum F{component}|^2 against the exact PSF of the pointwise
// product aperture, with relative L2 errors reported separately inside and
// outside a central exclusion disk.
inline std::pair<PsfImage, ApproximationReport> component_sum_psf(
    const std::vector<Image>& components, const Image& base,
    double exclusion_radius = 5.0) {
  check_arg(base.channels == 1 && base.width == base.height,
            "component_sum_psf: base must be a square single-channel mask");
  for (const auto& c : components) check_shape_match(c, base);

  const int n = base.width;
  std::vector<Complex> sum_spectrum(std::size_t(n) * n, Complex(0, 0));
  Image product = base;

  auto transform_of = [n](const Image& m) {
    std::vector<Complex> f(std::size_t(n) * n);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex(m.data[i], 0.0);
    centered_dft2d(f, n, n);
    return f;
  };

  std::vector<Complex> base_spectrum = transform_of(base);
  for (std::size_t i = 0; i < sum_spectrum.size(); ++i)
    sum_spectrum[i] = base_spectrum[i];
  for (const auto& comp : components) {
    auto f = transform_of(comp);
    for (std::size_t i = 0; i < sum_spectrum.size(); ++i)
      sum_spectrum[i] += f[i];
    for (std::size_t i = 0; i < product.data.size(); ++i)
      product.data[i] *= comp.data[i];
  }

  PsfImage approx;
  approx.width = approx.height = n;
  approx.channels = 1;
  approx.data.resize(sum_spectrum.size());
  for (std::size_t i = 0; i < sum_spectrum.size(); ++i)
    approx.data[i] = std::norm(sum_spectrum[i]);

  PsfImage exact = psf_from_mask(product);
  PsfImage clean;
  clean.width = clean.height = n;
  clean.channels = 1;
  clean.data.resize(base_spectrum.size());
  for (std::size_t i = 0; i < base_spectrum.size(); ++i)
    clean.data[i] = std::norm(base_spectrum[i]);

  ApproximationReport report;
  report.exclusion_radius = exclusion_radius;
  detail::split_l2(approx, exact, exclusion_radius, &report.inside_error,
                   &report.outside_error);
  detail::split_l2(clean, exact, exclusion_radius, &report.clean_inside_error,
                   &report.clean_outside_error);
  return {std::move(approx), report};
}

// Display mapping -----------------------------------------------------------

// Peak-normalizes and applies the square-root display approximation.
inline Image tonemap_psf(const PsfImage& psf) {
  for (double v : psf.data)
    check_arg(v >= 0.0, "tonemap_psf: PSF must be non-negative");
  double peak = psf.peak();
  check_arg(peak > 0.0, "tonemap_psf: all-zero PSF has no peak");
  Image out(psf.width, psf.height, psf.channels);
  for (std::size_t i = 0; i < psf.data.size(); ++i)
    out.data[i] = static_cast<float>(std::sqrt(psf.data[i] / peak));
  return out;
}

}  // namespace flare
