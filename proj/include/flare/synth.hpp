#pragma once

// Batch template synthesis: renders `count` images per manifest type into
// the layered dataset layout. Each (type, index) derives its RNG stream
// from (seed, type name, index), so output bytes depend only on the seed
// and the manifests, never on scheduling.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "flare/core.hpp"
#include "flare/manifest.hpp"
#include "flare/pairgen.hpp"
#include "flare/png_io.hpp"

namespace flare {

inline RngStream template_stream(std::uint64_t seed, const std::string& type,
                                 std::size_t index) {
  return RngStream{seed}.fork(hash_name(type)).fork(index);
}

// Scattering_Flare/{Compound_Flare,Light_Source,Glare_with_shimmer,Streak}/
// <type>_<index>.png
inline std::vector<std::string> synth_scatter(
    const std::vector<ScatterManifest>& manifests, int count,
    std::uint64_t seed, const std::string& out_dir, int threads = 0) {
  namespace fs = std::filesystem;
  check_arg(count >= 0, "count must be non-negative");
  check_arg(!manifests.empty(), "no scatter manifests given");
  const fs::path root = fs::path(out_dir) / "Scattering_Flare";
  const char* layers[4] = {"Compound_Flare", "Light_Source",
                           "Glare_with_shimmer", "Streak"};
  for (const char* layer : layers) fs::create_directories(root / layer);

  const std::size_t total = manifests.size() * std::size_t(count);
  std::vector<std::string> files(total * 4);
  parallel_for(total, threads, [&](std::size_t job) {
    const std::size_t type_i = job / count;
    const std::size_t idx = job % count;
    const ScatterManifest& m = manifests[type_i];
    RngStream rng = template_stream(seed, m.name, idx);
    FlareTemplate tpl = render_scatter_template(m, rng);

    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_%06zu.png", idx);
    auto emit = [&](int layer, const Image& img) {
      std::string path = (root / layers[layer] / (m.name + suffix)).string();
      save_image(img, path, 8, 3);
      files[job * 4 + layer] = std::move(path);
    };
    emit(0, tpl.composite);
    emit(1, tpl.source);
    emit(2, tpl.glare_with_shimmer());
    emit(3, tpl.streak);
  });

  Json manifest;
  manifest["schema"] = "synth-run/1";
  manifest["kind"] = "scatter";
  manifest["seed"] = seed;
  manifest["count"] = count;
  Json types = Json::array();
  for (const auto& m : manifests) types.push_back(m.name);
  manifest["types"] = types;
  detail::write_text_atomic((root / "run_manifest.json").string(),
                            manifest.dump(2) + "\n");
  return files;
}

// Reflective_Flare/<type>_<index>.png
inline std::vector<std::string> synth_reflect(
    const std::vector<ReflectManifest>& manifests, int count,
    std::uint64_t seed, const std::string& out_dir, int threads = 0) {
  namespace fs = std::filesystem;
  check_arg(count >= 0, "count must be non-negative");
  check_arg(!manifests.empty(), "no reflect manifests given");
  const fs::path root = fs::path(out_dir) / "Reflective_Flare";
  fs::create_directories(root);

  const std::size_t total = manifests.size() * std::size_t(count);
  std::vector<std::string> files(total);
  parallel_for(total, threads, [&](std::size_t job) {
    const std::size_t type_i = job / count;
    const std::size_t idx = job % count;
    const ReflectManifest& m = manifests[type_i];
    RngStream rng = template_stream(seed, m.name, idx);
    Image img = render_reflect_template(m, rng);

    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_%06zu.png", idx);
    std::string path = (root / (m.name + suffix)).string();
    save_image(img, path, 8, 3);
    files[job] = std::move(path);
  });

  Json manifest;
  manifest["schema"] = "synth-run/1";
  manifest["kind"] = "reflect";
  manifest["seed"] = seed;
  manifest["count"] = count;
  Json types = Json::array();
  for (const auto& m : manifests) types.push_back(m.name);
  manifest["types"] = types;
  detail::write_text_atomic((root / "run_manifest.json").string(),
                            manifest.dump(2) + "\n");
  return files;
}

}  // namespace flare
