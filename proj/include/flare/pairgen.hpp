#pragma once

// Paired flare-corrupted / flare-free sample generation: parameter sampling,
// background and flare augmentation in linear light, compositing, and the
// on-disk dataset writer. Every sample derives its own RNG streams from
// (seed, index), so runs are reproducible byte-for-byte for any thread
// count.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flare/core.hpp"
#include "flare/evalkit.hpp"
#include "flare/imaging.hpp"
#include "flare/manifest.hpp"
#include "flare/png_io.hpp"

namespace flare {

// Augmentation parameters ------------------------------------------------

struct AugmentParams {
  double gamma = 2.0;          // U(1.8, 2.2)
  double gain[3] = {1, 1, 1};  // U(0.5, 1.2) per channel
  double noise_var = 0.0;      // 0.01 * chi^2(dof)
  AffineParams affine;         // rotation U(0,2pi), translate U(-300,300) px,
                               // shear U(-pi/9,pi/9), scale U(0.8,1.5),
                               // flips Bernoulli(1/2)
  double brightness = 1.0;     // U(0.8, 3)
  double blur_sigma = 1.0;     // U(0.1, 3) px
  double color_offset = 0.0;   // U(-0.02, 0.02)
};

// Draw order is fixed: gamma, RGB gains, chi-square normals, rotation,
// translation, shear, scale, flips, brightness, blur, color offset.
inline AugmentParams sample_params(RngStream& rng, int chi2_dof = 1) {
  check_arg(chi2_dof >= 1, "sample_params: chi-square dof must be >= 1");
  AugmentParams p;
  p.gamma = rng.uniform(1.8, 2.2);
  for (int c = 0; c < 3; ++c) p.gain[c] = rng.uniform(0.5, 1.2);
  double chi2 = 0.0;
  for (int i = 0; i < chi2_dof; ++i) {
    double n = rng.normal();
    chi2 += n * n;
  }
  p.noise_var = 0.01 * chi2;
  p.affine.rotation = rng.uniform(0.0, 2.0 * kPi);
  p.affine.translate_x = rng.uniform(-300.0, 300.0);
  p.affine.translate_y = rng.uniform(-300.0, 300.0);
  p.affine.shear = rng.uniform(-kPi / 9.0, kPi / 9.0);
  p.affine.scale = rng.uniform(0.8, 1.5);
  p.affine.flip_h = rng.bernoulli();
  p.affine.flip_v = rng.bernoulli();
  p.brightness = rng.uniform(0.8, 3.0);
  p.blur_sigma = rng.uniform(0.1, 3.0);
  p.color_offset = rng.uniform(-0.02, 0.02);
  return p;
}

inline Image to_rgb(const Image& img) {
  if (img.channels == 3) return img;
  Image out(img.width, img.height, 3);
  for (std::size_t p = 0; p < img.pixel_count(); ++p)
    for (int c = 0; c < 3; ++c) out.data[p * 3 + c] = img.data[p];
  return out;
}

// sRGB background -> linear ground truth: inverse gamma, per-channel gain,
// additive Gaussian noise, clipped to [0,1].
inline Image augment_background(const Image& img, const AugmentParams& p,
                                RngStream& rng) {
  Image out = apply_gamma(to_rgb(img), p.gamma);
  const double sigma = std::sqrt(p.noise_var);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double v = out.data[i] * p.gain[i % 3];
    if (sigma > 0.0) v += sigma * rng.normal();
    out.data[i] = clamp01(static_cast<float>(v));
  }
  return out;
}

// Flare augmentation: degamma the summed scatter+reflective image, then
// affine warp, brightness, blur, and global color offset, clamped to >= 0.
// All photometric work happens in linear light.
inline Image augment_flare(const FlareTemplate& scatter_t,
                           const Image& reflective, const AugmentParams& p) {
  Image sum = scatter_t.composite;
  if (!reflective.empty()) {
    Image refl = to_rgb(reflective);
    if (refl.width != sum.width || refl.height != sum.height)
      refl = resize_bilinear(refl, sum.width, sum.height);
    for (std::size_t i = 0; i < sum.data.size(); ++i)
      sum.data[i] += refl.data[i];
  }
  Image flare_linear = apply_gamma(std::move(sum), p.gamma);
  flare_linear = warp_affine(flare_linear, p.affine);
  for (float& v : flare_linear.data) v = static_cast<float>(v * p.brightness);
  flare_linear = gaussian_blur(flare_linear, p.blur_sigma);
  for (float& v : flare_linear.data)
    v = std::max(0.0f, v + static_cast<float>(p.color_offset));
  return flare_linear;
}

// Paired sample ------------------------------------------------------------

struct PairedSample {
  Image input;  // linear, clip01(gt + flare)
  Image gt;     // linear flare-free ground truth
  Image flare;  // linear flare-only ground truth
  double gamma = 2.0;
  std::uint64_t seed = 0;
  std::string background_id;
  std::string scatter_id;
  std::string reflect_id;
};

// In linear space: input = clip01(gt + flare); wherever no clipping occurred
// the subtraction input - gt recovers the flare.
inline PairedSample composite_pair(const Image& bg_linear,
                                   const Image& flare_linear, double gamma) {
  check_shape_match(bg_linear, flare_linear);
  check_arg(gamma > 0.0, "composite_pair: gamma must be positive");
  PairedSample s;
  s.gamma = gamma;
  s.gt = bg_linear;
  s.flare = flare_linear;
  s.input = bg_linear;
  for (std::size_t i = 0; i < s.input.data.size(); ++i)
    s.input.data[i] = clamp01(bg_linear.data[i] + flare_linear.data[i]);
  return s;
}

// Re-encodes a linear image with the pair's gamma for export.
inline Image encode_with_gamma(const Image& linear, double gamma) {
  return apply_gamma(clip01(linear), 1.0 / gamma);
}

// Dataset writer -------------------------------------------------------------

struct PairGenConfig {
  std::uint64_t seed = 0;
  int count = 0;
  int out_size = 512;
  int chi2_dof = 1;
  int threads = 0;  // 0 = default_thread_count()
};

inline std::vector<std::string> list_background_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw IoError("backgrounds directory does not exist: " + dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
      files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Deterministic random-access pair source; index i is always the same
// sample for a given seed, manifests, and background list.
class PairStream {
 public:
  PairStream(std::vector<ScatterManifest> scatter,
             std::vector<ReflectManifest> reflect,
             std::vector<std::string> backgrounds, PairGenConfig cfg)
      : scatter_(std::move(scatter)),
        reflect_(std::move(reflect)),
        backgrounds_(std::move(backgrounds)),
        cfg_(cfg) {
    check_arg(!scatter_.empty(), "pair generation needs a scatter manifest");
    check_arg(!backgrounds_.empty(), "pair generation needs backgrounds");
    check_arg(cfg_.out_size >= 32, "output size must be >= 32");
    for (const auto& m : scatter_)
      check_arg(m.canvas >= cfg_.out_size,
                "scatter canvas smaller than the output size");
  }

  PairedSample at(std::size_t index) const {
    RngStream base{cfg_.seed};
    base = base.fork(index);
    RngStream pick = base.fork(0);
    RngStream tmpl = base.fork(1);
    RngStream params_rng = base.fork(2);
    RngStream noise = base.fork(3);

    std::size_t bg_i = pick.next_u64() % backgrounds_.size();
    std::size_t sc_i = pick.next_u64() % scatter_.size();
    std::size_t rf_i =
        reflect_.empty() ? 0 : pick.next_u64() % reflect_.size();

    FlareTemplate scatter_tpl = render_scatter_template(scatter_[sc_i], tmpl);
    Image reflective;
    if (!reflect_.empty())
      reflective = render_reflect_template(reflect_[rf_i], tmpl);

    AugmentParams p = sample_params(params_rng, cfg_.chi2_dof);

    Image bg = load_image(backgrounds_[bg_i]);
    int side = std::min(bg.width, bg.height);
    bg = center_crop(to_rgb(bg), side, side);
    bg = resize_bilinear(bg, cfg_.out_size, cfg_.out_size);
    Image gt_linear = augment_background(bg, p, noise);

    Image flare_linear = augment_flare(scatter_tpl, reflective, p);
    flare_linear = center_crop(flare_linear, cfg_.out_size, cfg_.out_size);

    PairedSample s = composite_pair(gt_linear, flare_linear, p.gamma);
    s.seed = cfg_.seed;
    s.background_id = std::filesystem::path(backgrounds_[bg_i])
                          .filename()
                          .string();
    s.scatter_id = scatter_[sc_i].name;
    s.reflect_id = reflect_.empty() ? "" : reflect_[rf_i].name;
    return s;
  }

  // Re-derives the parameter draw of sample `index`; used by the dataset
  // writer to record the run manifest.
  AugmentParams sample_params_for(std::size_t index) const {
    RngStream base{cfg_.seed};
    RngStream params_rng = base.fork(index).fork(2);
    return sample_params(params_rng, cfg_.chi2_dof);
  }

  std::size_t background_count() const { return backgrounds_.size(); }
  const PairGenConfig& config() const { return cfg_; }

 private:
  std::vector<ScatterManifest> scatter_;
  std::vector<ReflectManifest> reflect_;
  std::vector<std::string> backgrounds_;
  PairGenConfig cfg_;
};

namespace detail {
inline Json params_to_json(const AugmentParams& p) {
  return Json{{"gamma", p.gamma},
              {"gain", {p.gain[0], p.gain[1], p.gain[2]}},
              {"noise_var", p.noise_var},
              {"rotation", p.affine.rotation},
              {"translate", {p.affine.translate_x, p.affine.translate_y}},
              {"shear", p.affine.shear},
              {"scale", p.affine.scale},
              {"flip_h", p.affine.flip_h},
              {"flip_v", p.affine.flip_v},
              {"brightness", p.brightness},
              {"blur_sigma", p.blur_sigma},
              {"color_offset", p.color_offset}};
}

inline void write_text_atomic(const std::string& path,
                              const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}
}  // namespace detail

// Writes count samples as pairs/{input,gt,flare,mask}/NNNNNN.png plus a run
// manifest recording every seed and parameter draw. The manifest is written
// only after every sample succeeded, so an aborted run leaves no index.
// Returns the run manifest path.
inline std::string generate_dataset(
    const std::vector<ScatterManifest>& scatter_manifests,
    const std::vector<ReflectManifest>& reflect_manifests,
    const std::string& backgrounds_dir, const PairGenConfig& cfg,
    const std::string& out_dir) {
  namespace fs = std::filesystem;
  check_arg(cfg.count >= 0, "count must be non-negative");
  auto backgrounds = list_background_files(backgrounds_dir);
  if (backgrounds.empty())
    throw IoError("no PNG/JPEG backgrounds in " + backgrounds_dir);
  if (scatter_manifests.empty())
    throw std::invalid_argument("at least one scatter manifest is required");

  PairStream stream(scatter_manifests, reflect_manifests, backgrounds, cfg);

  const fs::path root = fs::path(out_dir) / "pairs";
  for (const char* sub : {"input", "gt", "flare", "mask"})
    fs::create_directories(root / sub);

  std::vector<Json> records(cfg.count);
  parallel_for(cfg.count, cfg.threads, [&](std::size_t i) {
    PairedSample s = stream.at(i);
    char name[16];
    std::snprintf(name, sizeof(name), "%06zu.png", i);

    Image input_png = encode_with_gamma(s.input, s.gamma);
    Image gt_png = encode_with_gamma(s.gt, s.gamma);
    Image flare_png = encode_with_gamma(s.flare, s.gamma);
    SaturationMask mask = saturation_mask(input_png);

    try {
      save_image(input_png, (root / "input" / name).string(), 8, 3);
      save_image(gt_png, (root / "gt" / name).string(), 8, 3);
      save_image(flare_png, (root / "flare" / name).string(), 8, 3);
      save_image(mask.binary, (root / "mask" / name).string(), 8, 3);
    } catch (const std::exception& e) {
      throw IoError("sample " + std::string(name) + ": " + e.what());
    }

    Json rec = detail::params_to_json(stream.sample_params_for(i));
    rec["index"] = i;
    rec["background"] = s.background_id;
    rec["scatter_type"] = s.scatter_id;
    rec["reflect_type"] = s.reflect_id;
    rec["files"] = {std::string("pairs/input/") + name,
                    std::string("pairs/gt/") + name,
                    std::string("pairs/flare/") + name,
                    std::string("pairs/mask/") + name};
    records[i] = std::move(rec);
  });

  Json manifest;
  manifest["schema"] = "pair-run/1";
  manifest["seed"] = cfg.seed;
  manifest["count"] = cfg.count;
  manifest["out_size"] = cfg.out_size;
  manifest["chi2_dof"] = cfg.chi2_dof;
  manifest["saturation_threshold"] = kSaturationThreshold;
  manifest["samples"] = records;
  std::string path = (fs::path(out_dir) / "run_manifest.json").string();
  detail::write_text_atomic(path, manifest.dump(2) + "\n");
  return path;
}

}  // namespace flare
