#pragma once

// Post-processing and full-reference evaluation: the saturation paste-back
// used to restore light sources after deflaring, PSNR, single-scale SSIM,
// and a directory-vs-directory metric report.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "flare/core.hpp"
#include "flare/imaging.hpp"
#include "flare/png_io.hpp"

namespace flare {

inline constexpr double kSaturationThreshold = 0.97;
inline constexpr double kPsnrReportCap = 100.0;  // dB, stands in for +inf

// Saturation mask -------------------------------------------------------

// A pixel counts as saturated when its brightest channel reaches the
// threshold; nighttime sources rarely saturate all three channels at once.
struct SaturationMask {
  Image binary;   // 1 where the predicate holds
  Image weights;  // feathered weights in [0,1]; equals binary at feather 0
  double threshold = kSaturationThreshold;
  double feather_radius = 0.0;
};

inline SaturationMask saturation_mask(const Image& img,
                                      double threshold = kSaturationThreshold,
                                      double feather_radius = 0.0) {
  check_arg(threshold > 0.0 && threshold <= 1.0,
            "saturation threshold must be in (0,1]");
  check_arg(feather_radius >= 0.0, "feather radius must be non-negative");
  SaturationMask mask;
  mask.threshold = threshold;
  mask.feather_radius = feather_radius;
  mask.binary = Image(img.width, img.height, 1);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    float m = 0.0f;
    for (int c = 0; c < img.channels; ++c)
      m = std::max(m, img.data[p * img.channels + c]);
    mask.binary.data[p] = m >= static_cast<float>(threshold) ? 1.0f : 0.0f;
  }
  if (feather_radius <= 0.0) {
    mask.weights = mask.binary;
    return mask;
  }
  // raised-cosine kernel, unit sum: interior stays 1, edges ramp smoothly
  int r = static_cast<int>(std::ceil(feather_radius));
  std::vector<double> kernel;
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      double d = std::hypot(dx, dy);
      double w = d > feather_radius
                     ? 0.0
                     : 0.5 * (1.0 + std::cos(kPi * d / feather_radius));
      kernel.push_back(w);
      sum += w;
    }
  mask.weights = Image(img.width, img.height, 1);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      std::size_t k = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx, ++k) {
          int xi = std::clamp(x + dx, 0, img.width - 1);
          int yi = std::clamp(y + dy, 0, img.height - 1);
          acc += kernel[k] * mask.binary.at(xi, yi);
        }
      mask.weights.at(x, y) = static_cast<float>(acc / sum);
    }
  return mask;
}

// out = w * input + (1 - w) * deflared, with w the (feathered) mask weight.
inline Image paste_back(const Image& deflared, const Image& input,
                        const SaturationMask& mask) {
  check_shape_match(deflared, input);
  check_arg(mask.weights.width == deflared.width &&
                mask.weights.height == deflared.height,
            "paste_back: mask shape mismatch");
  Image out = deflared;
  for (std::size_t p = 0; p < out.pixel_count(); ++p) {
    float w = mask.weights.data[p];
    if (w == 0.0f) continue;
    for (int c = 0; c < out.channels; ++c) {
      std::size_t i = p * out.channels + c;
      out.data[i] = w * input.data[i] + (1.0f - w) * deflared.data[i];
    }
  }
  return out;
}

// PSNR -------------------------------------------------------------------

// 10*log10(peak^2 / MSE) over all samples; identical images yield +inf
// (reports cap it at kPsnrReportCap).
inline double psnr(const Image& a, const Image& b, double peak = 1.0) {
  check_shape_match(a, b);
  check_arg(peak > 0.0, "psnr: peak must be positive");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = double(a.data[i]) - double(b.data[i]);
    mse += d * d;
  }
  mse /= double(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

// SSIM -------------------------------------------------------------------

namespace detail {
inline std::vector<double> ssim_window() {
  // 11x11 Gaussian, sigma 1.5, unit sum
  std::vector<double> w(11);
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    double d = i - 5;
    w[i] = std::exp(-0.5 * d * d / (1.5 * 1.5));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable valid-region filtering: output is (w-10) x (h-10).
inline std::vector<double> filter_valid(const std::vector<double>& img, int w,
                                        int h, const std::vector<double>& k) {
  const int vw = w - 10;
  std::vector<double> tmp(std::size_t(vw) * h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < vw; ++x) {
      double acc = 0.0;
      for (int i = 0; i < 11; ++i) acc += k[i] * img[std::size_t(y) * w + x + i];
      tmp[std::size_t(y) * vw + x] = acc;
    }
  const int vh = h - 10;
  std::vector<double> out(std::size_t(vw) * vh, 0.0);
  for (int y = 0; y < vh; ++y)
    for (int x = 0; x < vw; ++x) {
      double acc = 0.0;
      for (int i = 0; i < 11; ++i) acc += k[i] * tmp[std::size_t(y + i) * vw + x];
      out[std::size_t(y) * vw + x] = acc;
    }
  return out;
}
}  // namespace detail

// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), C1=(0.01*peak)^2,
// C2=(0.03*peak)^2, averaged over fully valid window positions. 3-channel
// input is reduced to luma first.
inline double ssim(const Image& a, const Image& b, double peak = 1.0) {
  check_shape_match(a, b);
  if (a.width < 11 || a.height < 11)
    throw std::invalid_argument("ssim: images smaller than the 11x11 window");

  Image ga = to_gray(a);
  Image gb = to_gray(b);
  const int w = a.width, h = a.height;
  std::vector<double> xa(ga.data.begin(), ga.data.end());
  std::vector<double> xb(gb.data.begin(), gb.data.end());
  std::vector<double> xaa(xa.size()), xbb(xa.size()), xab(xa.size());
  for (std::size_t i = 0; i < xa.size(); ++i) {
    xaa[i] = xa[i] * xa[i];
    xbb[i] = xb[i] * xb[i];
    xab[i] = xa[i] * xb[i];
  }
  const auto k = detail::ssim_window();
  auto mu_a = detail::filter_valid(xa, w, h, k);
  auto mu_b = detail::filter_valid(xb, w, h, k);
  auto m_aa = detail::filter_valid(xaa, w, h, k);
  auto m_bb = detail::filter_valid(xbb, w, h, k);
  auto m_ab = detail::filter_valid(xab, w, h, k);

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    double va = m_aa[i] - mu_a[i] * mu_a[i];
    double vb = m_bb[i] - mu_b[i] * mu_b[i];
    double cov = m_ab[i] - mu_a[i] * mu_b[i];
    double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2);
    total += num / den;
  }
  return total / double(mu_a.size());
}

// Directory evaluation -----------------------------------------------------

struct MetricRecord {
  std::string name;
  double psnr_db = 0.0;  // capped at kPsnrReportCap
  double ssim_score = 0.0;
};

struct MetricReport {
  std::vector<MetricRecord> records;  // ordered by filename
  std::vector<std::string> errors;    // missing counterparts, by name
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::size_t count = 0;
};

// Scores every filename common to both directories; missing counterparts on
// either side are reported by name without aborting the rest.
inline MetricReport evaluate_dirs(const std::string& pred_dir,
                                  const std::string& gt_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(pred_dir))
    throw IoError("not a directory: " + pred_dir);
  if (!fs::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir);

  auto list_images = [](const std::string& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      auto ext = e.path().extension().string();
      if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
        names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
  };
  auto pred_names = list_images(pred_dir);
  auto gt_names = list_images(gt_dir);

  MetricReport report;
  for (const auto& n : gt_names)
    if (!std::binary_search(pred_names.begin(), pred_names.end(), n))
      report.errors.push_back("missing prediction for " + n);

  std::vector<std::string> common;
  for (const auto& n : pred_names) {
    if (std::binary_search(gt_names.begin(), gt_names.end(), n))
      common.push_back(n);
    else
      report.errors.push_back("missing ground truth for " + n);
  }

  report.records.resize(common.size());
  for (std::size_t i = 0; i < common.size(); ++i) {
    Image pred = load_image((fs::path(pred_dir) / common[i]).string());
    Image gt = load_image((fs::path(gt_dir) / common[i]).string());
    MetricRecord rec;
    rec.name = common[i];
    rec.psnr_db = std::min(psnr(pred, gt), kPsnrReportCap);
    rec.ssim_score = ssim(pred, gt);
    report.records[i] = std::move(rec);
  }
  report.count = report.records.size();
  if (report.count > 0) {
    double ps = 0.0, ss = 0.0;
    for (const auto& r : report.records) {
      ps += r.psnr_db;
      ss += r.ssim_score;
    }
    report.mean_psnr = ps / double(report.count);
    report.mean_ssim = ss / double(report.count);
  }
  return report;
}

}  // namespace flare
