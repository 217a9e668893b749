// flarekit: lens-flare synthesis and paired-dataset generation.
//
// Subcommands:
//   psf            render the spectral PSF of an aperture manifest
//   synth-scatter  batch-render scattering flare templates (4 layers each)
//   synth-reflect  batch-render reflective flare templates
//   make-pairs     build flare-corrupted / flare-free training pairs
//   eval           PSNR/SSIM report between two image directories
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "flare/evalkit.hpp"
#include "flare/manifest.hpp"
#include "flare/optics.hpp"
#include "flare/pairgen.hpp"
#include "flare/png_io.hpp"
#include "flare/synth.hpp"

namespace fs = std::filesystem;
using namespace flare;

namespace {

constexpr std::uint64_t kDefaultSeed = 7000;

int verbosity = 0;

void info(const std::string& msg) {
  if (verbosity > 0) std::cerr << "flarekit: " << msg << "\n";
}

std::vector<std::string> collect_manifest_paths(
    const std::string& dir, const std::vector<std::string>& files) {
  std::vector<std::string> paths = files;
  if (!dir.empty()) {
    auto listed = list_manifest_files(dir);
    paths.insert(paths.end(), listed.begin(), listed.end());
  }
  if (paths.empty())
    throw FormatError("no manifests given (use --manifest or --manifest-dir)");
  return paths;
}

int run_psf(const std::string& manifest_path, const std::string& out_path,
            int grid_size, double z0, double focal_length, double source_x,
            double source_y, double amplitude, int bands, double band_lo,
            double band_hi, bool sum_components) {
  ApertureManifest manifest = load_aperture_manifest(manifest_path);
  if (!is_power_of_two(grid_size))
    throw FormatError("--grid must be a power of two");

  GridGeometry grid{grid_size, manifest.pitch > 0.0
                                   ? manifest.pitch
                                   : default_pitch(manifest.spec.clear_radius,
                                                   grid_size)};
  OpticalSetup setup =
      OpticalSetup::in_focus(focal_length, z0, source_x, source_y, amplitude);

  std::vector<SpectralSample> samples;
  for (int i = 0; i < bands; ++i) {
    double t = bands == 1 ? 0.5 : double(i) / (bands - 1);
    samples.push_back({band_lo + (band_hi - band_lo) * t, 1.0});
  }
  Spectrum spectrum = Spectrum::from_samples(std::move(samples));

  info("rendering spectral PSF at " + std::to_string(grid_size) + "^2");
  PsfImage psf = spectral_psf(manifest.spec, grid, setup, spectrum);
  Image mapped = tonemap_psf(psf);
  save_image(mapped, out_path, 16);
  info("wrote " + out_path);

  // plain-text sidecar describing the simulation
  fs::path sidecar = fs::path(out_path).replace_extension(".txt");
  {
    std::ofstream txt(sidecar);
    if (!txt) throw IoError("cannot write " + sidecar.string());
    txt << "aperture: " << manifest.name << "\n";
    txt << "grid_size: " << grid.size << "\n";
    txt << "pitch_m: " << grid.pitch << "\n";
    txt << "clear_radius_m: " << manifest.spec.clear_radius << "\n";
    txt << "focal_length_m: " << setup.focal_length << "\n";
    txt << "source_m: " << setup.source_x << " " << setup.source_y << " "
        << setup.source_z << "\n";
    txt << "image_distance_m: " << setup.image_distance << "\n";
    txt << "amplitude: " << setup.amplitude << "\n";
    txt << "spectrum_nm:";
    for (const auto& s : spectrum.samples) txt << " " << s.lambda_nm;
    txt << "\n";
    txt << "weights:";
    for (const auto& s : spectrum.samples) txt << " " << s.weight;
    txt << "\n";
  }

  if (sum_components) {
    // one transmission component per dirt kind, per the flare taxonomy:
    // disks -> glare, gratings -> streak, segments -> shimmer
    Image base_mask = rasterize_aperture(
        {manifest.spec.clear_radius, manifest.spec.polygon, {}}, grid);
    auto kind_mask = [&](DirtPrimitive::Kind kind) {
      Image mask(grid.size, grid.size, 1, 1.0f);
      bool any = false;
      for (const auto& d : manifest.spec.dirt) {
        if (d.kind != kind) continue;
        any = true;
        for (int y = 0; y < grid.size; ++y)
          for (int x = 0; x < grid.size; ++x)
            if (d.opaque_at(grid.coord(x), grid.coord(y)))
              mask.at(x, y) = 0.0f;
      }
      return std::pair{any, std::move(mask)};
    };
    std::vector<Image> components;
    std::vector<std::string> labels;
    for (auto [kind, label] :
         {std::pair{DirtPrimitive::Kind::Disk, "glare"},
          {DirtPrimitive::Kind::Grating, "streak"},
          {DirtPrimitive::Kind::Segment, "shimmer"}}) {
      auto [any, mask] = kind_mask(kind);
      if (any) {
        components.push_back(std::move(mask));
        labels.push_back(label);
      }
    }
    auto [approx, report] = component_sum_psf(components, base_mask);
    Json rj;
    rj["components"] = labels;
    rj["exclusion_radius_px"] = report.exclusion_radius;
    rj["inside_error"] = report.inside_error;
    rj["outside_error"] = report.outside_error;
    rj["clean_inside_error"] = report.clean_inside_error;
    rj["clean_outside_error"] = report.clean_outside_error;
    fs::path report_path = fs::path(out_path).replace_extension("");
    report_path += "_report.json";
    std::ofstream rf(report_path);
    if (!rf) throw IoError("cannot write " + report_path.string());
    rf << rj.dump(2) << "\n";
    std::cout << "component-sum approximation: outside_error="
              << report.outside_error
              << " clean_outside_error=" << report.clean_outside_error
              << " (report: " << report_path.string() << ")\n";
  }
  return 0;
}

int run_eval(const std::string& pred_dir, const std::string& gt_dir,
             const std::string& report_path) {
  MetricReport report = evaluate_dirs(pred_dir, gt_dir);
  for (const auto& r : report.records)
    std::printf("%-32s  psnr %8.4f dB  ssim %8.6f\n", r.name.c_str(),
                r.psnr_db, r.ssim_score);
  for (const auto& e : report.errors) std::printf("error: %s\n", e.c_str());
  std::printf("mean over %zu files: psnr %.4f dB, ssim %.6f\n", report.count,
              report.mean_psnr, report.mean_ssim);
  if (!report_path.empty()) {
    Json rj;
    rj["count"] = report.count;
    rj["mean_psnr"] = report.mean_psnr;
    rj["mean_ssim"] = report.mean_ssim;
    Json records = Json::array();
    for (const auto& r : report.records)
      records.push_back(
          {{"name", r.name}, {"psnr", r.psnr_db}, {"ssim", r.ssim_score}});
    rj["records"] = records;
    rj["errors"] = report.errors;
    std::ofstream rf(report_path);
    if (!rf) throw IoError("cannot write " + report_path);
    rf << rj.dump(2) << "\n";
  }
  return report.errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lens-flare synthesis and paired-dataset generation"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", verbosity, "print progress to stderr");

  // psf ----------------------------------------------------------------
  std::string psf_manifest, psf_out = "psf.png";
  int psf_grid = 1024, psf_bands = 8;
  double psf_z0 = 10.0, psf_f = 0.05, psf_sx = 0.0, psf_sy = 0.0, psf_a0 = 1.0;
  double psf_band_lo = 560.0, psf_band_hi = 630.0;
  bool psf_sum = false;
  CLI::App* psf = app.add_subcommand("psf", "render a spectral PSF");
  psf->add_option("--manifest", psf_manifest, "aperture manifest (json)")
      ->required();
  psf->add_option("--out", psf_out, "output PNG path");
  psf->add_option("--grid", psf_grid, "grid size (power of two)");
  psf->add_option("--z0", psf_z0, "source distance in meters");
  psf->add_option("--focal-length", psf_f, "focal length in meters");
  psf->add_option("--source-x", psf_sx, "source x offset in meters");
  psf->add_option("--source-y", psf_sy, "source y offset in meters");
  psf->add_option("--amplitude", psf_a0, "source amplitude");
  psf->add_option("--bands", psf_bands, "spectral sample count");
  psf->add_option("--band-lo", psf_band_lo, "band start in nm");
  psf->add_option("--band-hi", psf_band_hi, "band end in nm");
  psf->add_flag("--sum-components", psf_sum,
                "also write the component-sum approximation report");

  // synth --------------------------------------------------------------
  struct SynthArgs {
    std::string manifest_dir;
    std::vector<std::string> manifests;
    std::string out = "flare_out";
    int count = 200;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
  };
  SynthArgs sc, rf;
  CLI::App* synth_scatter_cmd =
      app.add_subcommand("synth-scatter", "render scattering flare templates");
  CLI::App* synth_reflect_cmd =
      app.add_subcommand("synth-reflect", "render reflective flare templates");
  for (auto [cmd, args] : {std::pair{synth_scatter_cmd, &sc},
                           std::pair{synth_reflect_cmd, &rf}}) {
    cmd->add_option("--manifest-dir", args->manifest_dir,
                    "directory of type manifests");
    cmd->add_option("--manifest", args->manifests, "individual manifest file");
    cmd->add_option("--out", args->out, "output directory");
    cmd->add_option("--count", args->count, "images per type");
    cmd->add_option("--seed", args->seed, "RNG seed");
    cmd->add_option("--threads", args->threads, "worker threads (0 = auto)");
  }

  // make-pairs -----------------------------------------------------------
  std::string mp_scatter_dir, mp_reflect_dir, mp_backgrounds, mp_out = "pairs_out";
  PairGenConfig mp_cfg;
  mp_cfg.seed = kDefaultSeed;
  mp_cfg.count = 200;
  CLI::App* pairs = app.add_subcommand(
      "make-pairs", "generate flare-corrupted/flare-free pairs");
  pairs->add_option("--scatter-dir", mp_scatter_dir,
                    "directory of scatter manifests")
      ->required();
  pairs->add_option("--reflect-dir", mp_reflect_dir,
                    "directory of reflect manifests (optional)");
  pairs->add_option("--backgrounds", mp_backgrounds,
                    "directory of background photos (png/jpeg)")
      ->required();
  pairs->add_option("--out", mp_out, "output directory");
  pairs->add_option("--count", mp_cfg.count, "number of pairs");
  pairs->add_option("--seed", mp_cfg.seed, "RNG seed");
  pairs->add_option("--size", mp_cfg.out_size, "output image size");
  pairs->add_option("--chi2-dof", mp_cfg.chi2_dof,
                    "degrees of freedom of the noise-variance draw");
  pairs->add_option("--threads", mp_cfg.threads, "worker threads (0 = auto)");

  // eval ----------------------------------------------------------------
  std::string ev_pred, ev_gt, ev_report;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "PSNR/SSIM between two directories");
  eval_cmd->add_option("--pred", ev_pred, "predictions directory")->required();
  eval_cmd->add_option("--gt", ev_gt, "ground-truth directory")->required();
  eval_cmd->add_option("--out", ev_report, "machine-readable report (json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (psf->parsed()) {
      if (!fs::exists(psf_manifest)) {
        std::cerr << "flarekit: manifest not found: " << psf_manifest << "\n";
        return 2;
      }
      return run_psf(psf_manifest, psf_out, psf_grid, psf_z0, psf_f, psf_sx,
                     psf_sy, psf_a0, psf_bands, psf_band_lo, psf_band_hi,
                     psf_sum);
    }
    if (synth_scatter_cmd->parsed()) {
      std::vector<ScatterManifest> manifests;
      for (const auto& p : collect_manifest_paths(sc.manifest_dir, sc.manifests))
        manifests.push_back(load_scatter_manifest(p));
      info("rendering " + std::to_string(manifests.size()) + " scatter types x " +
           std::to_string(sc.count));
      synth_scatter(manifests, sc.count, sc.seed, sc.out, sc.threads);
      return 0;
    }
    if (synth_reflect_cmd->parsed()) {
      std::vector<ReflectManifest> manifests;
      for (const auto& p : collect_manifest_paths(rf.manifest_dir, rf.manifests))
        manifests.push_back(load_reflect_manifest(p));
      info("rendering " + std::to_string(manifests.size()) + " reflect types x " +
           std::to_string(rf.count));
      synth_reflect(manifests, rf.count, rf.seed, rf.out, rf.threads);
      return 0;
    }
    if (pairs->parsed()) {
      if (!fs::is_directory(mp_backgrounds)) {
        std::cerr << "flarekit: backgrounds directory not found: "
                  << mp_backgrounds << "\n";
        return 2;
      }
      if (!fs::is_directory(mp_scatter_dir)) {
        std::cerr << "flarekit: scatter manifest directory not found: "
                  << mp_scatter_dir << "\n";
        return 2;
      }
      std::vector<ScatterManifest> scatter;
      for (const auto& p : list_manifest_files(mp_scatter_dir))
        scatter.push_back(load_scatter_manifest(p));
      std::vector<ReflectManifest> reflect;
      if (!mp_reflect_dir.empty()) {
        if (!fs::is_directory(mp_reflect_dir)) {
          std::cerr << "flarekit: reflect manifest directory not found: "
                    << mp_reflect_dir << "\n";
          return 2;
        }
        for (const auto& p : list_manifest_files(mp_reflect_dir))
          reflect.push_back(load_reflect_manifest(p));
      }
      std::string manifest =
          generate_dataset(scatter, reflect, mp_backgrounds, mp_cfg, mp_out);
      info("run manifest: " + manifest);
      return 0;
    }
    if (eval_cmd->parsed()) {
      if (!fs::is_directory(ev_pred) || !fs::is_directory(ev_gt)) {
        std::cerr << "flarekit: eval needs two existing directories\n";
        return 2;
      }
      return run_eval(ev_pred, ev_gt, ev_report);
    }
  } catch (const FormatError& e) {
    std::cerr << "flarekit: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "flarekit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "flarekit: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
