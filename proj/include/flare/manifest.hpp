#pragma once

// Manifest files: human-editable JSON presets describing one flare type
// (scatter or reflective) or one aperture. Every numeric scalar may be
// written either as a number or as a [lo, hi] pair sampled uniformly per
// generated image, which is how one preset yields a family of flares.
// Schemas are versioned and unknown keys are rejected.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flare/core.hpp"
#include "flare/optics.hpp"
#include "flare/reflect.hpp"
#include "flare/scatter.hpp"

namespace flare {

using Json = nlohmann::json;

// A fixed value or a uniform range.
struct Jitter {
  double lo = 0.0;
  double hi = 0.0;

  static Jitter fixed(double v) { return {v, v}; }
  double sample(RngStream& rng) const {
    return lo == hi ? lo : rng.uniform(lo, hi);
  }
};

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline Json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ":" +
                      std::to_string(line_of_byte(text, e.byte)) + ": " +
                      e.what());
  }
}

inline void check_keys(const Json& j, const std::string& ctx,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw FormatError(ctx + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw FormatError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

inline const Json& require(const Json& j, const char* key,
                           const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(ctx + ": missing required key \"" + key + "\"");
  return *it;
}

inline double as_number(const Json& v, const std::string& ctx) {
  if (!v.is_number()) throw FormatError(ctx + ": expected a number");
  return v.get<double>();
}

inline Jitter as_jitter(const Json& v, const std::string& ctx) {
  if (v.is_number()) return Jitter::fixed(v.get<double>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    Jitter j{v[0].get<double>(), v[1].get<double>()};
    if (j.hi < j.lo) throw FormatError(ctx + ": range must be [lo, hi]");
    return j;
  }
  throw FormatError(ctx + ": expected a number or a [lo, hi] pair");
}

inline Rgb as_rgb(const Json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != 3)
    throw FormatError(ctx + ": expected an [r, g, b] triple");
  return {as_number(v[0], ctx), as_number(v[1], ctx), as_number(v[2], ctx)};
}

inline void check_schema(const Json& j, const std::string& expected,
                         const std::string& ctx) {
  const Json& s = require(j, "schema", ctx);
  if (!s.is_string() || s.get<std::string>() != expected)
    throw FormatError(ctx + ": schema must be \"" + expected + "\"");
}

}  // namespace detail

// Scattering-flare manifest ---------------------------------------------

struct ScatterManifest {
  std::string name;
  int canvas = 1440;

  Jitter glare_radius;
  GlareCurve glare_curve;
  Jitter vanishing_angle = Jitter::fixed(0.0);
  Jitter vanishing_feather = Jitter::fixed(0.0);

  bool has_streak = false;
  Jitter streak_orientation = Jitter::fixed(0.0);
  Jitter streak_length;
  Jitter streak_width_a, streak_width_b;
  std::vector<SectionCurve::Point> section_norm;  // positions in [-1, 1]
  bool edge_blur_auto = true;
  Jitter edge_blur_a = Jitter::fixed(1.0);
  Jitter edge_blur_b = Jitter::fixed(1.0);

  bool has_shimmer = false;
  int spikes = 8;
  Jitter spike_amplitude = Jitter::fixed(0.5);
  Jitter spike_width = Jitter::fixed(0.04);
  Jitter shimmer_radius;
  Jitter shimmer_phase = Jitter::fixed(0.0);
  Rgb shimmer_tint{1, 1, 1};
  int noise_octaves = 4;
  double noise_persistence = 0.55;
  Jitter noise_patch_radius = Jitter::fixed(0.0);
  Jitter noise_radial_blur = Jitter::fixed(0.5);
  Jitter noise_opacity = Jitter::fixed(0.0);

  SourceSpec::Shape source_shape = SourceSpec::Shape::Disk;
  int source_sides = 6;
  Jitter source_rotation = Jitter::fixed(0.0);
  Jitter source_core;
  Jitter source_glow_radius;
  Jitter source_glow_exponent = Jitter::fixed(2.0);
  Rgb source_tint{1, 1, 1};
};

inline ScatterManifest parse_scatter_manifest(const Json& j,
                                              const std::string& ctx) {
  detail::check_keys(j, ctx,
                     {"schema", "name", "canvas", "glare", "streak", "shimmer",
                      "source"});
  detail::check_schema(j, "scatter/1", ctx);

  ScatterManifest m;
  m.name = detail::require(j, "name", ctx).get<std::string>();
  if (j.contains("canvas"))
    m.canvas = static_cast<int>(detail::as_number(j["canvas"], ctx));
  check_arg(m.canvas >= 32, "canvas must be at least 32 px");

  const Json& glare = detail::require(j, "glare", ctx);
  detail::check_keys(glare, ctx + ".glare",
                     {"radius", "curve", "vanishing_angle",
                      "vanishing_feather"});
  m.glare_radius = detail::as_jitter(detail::require(glare, "radius", ctx), ctx);
  const Json& curve = detail::require(glare, "curve", ctx);
  if (!curve.is_array() || curve.size() < 2)
    throw FormatError(ctx + ".glare.curve: expected [[d, [r,g,b]], ...]");
  for (const auto& p : curve) {
    if (!p.is_array() || p.size() != 2)
      throw FormatError(ctx + ".glare.curve: expected [d, [r,g,b]] entries");
    m.glare_curve.points.push_back(
        {detail::as_number(p[0], ctx), detail::as_rgb(p[1], ctx)});
  }
  m.glare_curve.validate();
  if (glare.contains("vanishing_angle"))
    m.vanishing_angle = detail::as_jitter(glare["vanishing_angle"], ctx);
  if (glare.contains("vanishing_feather"))
    m.vanishing_feather = detail::as_jitter(glare["vanishing_feather"], ctx);

  if (j.contains("streak") && !j["streak"].is_null()) {
    const Json& st = j["streak"];
    detail::check_keys(st, ctx + ".streak",
                       {"orientation", "length", "width_a", "width_b",
                        "section", "edge_blur"});
    m.has_streak = true;
    m.streak_orientation =
        detail::as_jitter(detail::require(st, "orientation", ctx), ctx);
    m.streak_length = detail::as_jitter(detail::require(st, "length", ctx), ctx);
    m.streak_width_a =
        detail::as_jitter(detail::require(st, "width_a", ctx), ctx);
    m.streak_width_b =
        detail::as_jitter(detail::require(st, "width_b", ctx), ctx);
    const Json& sec = detail::require(st, "section", ctx);
    if (!sec.is_array() || sec.size() < 2)
      throw FormatError(ctx + ".streak.section: expected [[pos, [r,g,b]], ...]");
    for (const auto& p : sec) {
      if (!p.is_array() || p.size() != 2)
        throw FormatError(ctx + ".streak.section: bad entry");
      m.section_norm.push_back(
          {detail::as_number(p[0], ctx), detail::as_rgb(p[1], ctx)});
    }
    const Json& blur = detail::require(st, "edge_blur", ctx);
    if (blur.is_string() && blur.get<std::string>() == "auto") {
      m.edge_blur_auto = true;
    } else if (blur.is_array() && blur.size() == 2) {
      m.edge_blur_auto = false;
      m.edge_blur_a = detail::as_jitter(blur[0], ctx);
      m.edge_blur_b = detail::as_jitter(blur[1], ctx);
    } else {
      throw FormatError(ctx + ".streak.edge_blur: expected \"auto\" or [a, b]");
    }
  }

  if (j.contains("shimmer") && !j["shimmer"].is_null()) {
    const Json& sh = j["shimmer"];
    detail::check_keys(sh, ctx + ".shimmer",
                       {"spikes", "amplitude", "width", "radius", "phase",
                        "tint", "noise"});
    m.has_shimmer = true;
    m.spikes =
        static_cast<int>(detail::as_number(detail::require(sh, "spikes", ctx), ctx));
    m.spike_amplitude =
        detail::as_jitter(detail::require(sh, "amplitude", ctx), ctx);
    m.spike_width = detail::as_jitter(detail::require(sh, "width", ctx), ctx);
    m.shimmer_radius = detail::as_jitter(detail::require(sh, "radius", ctx), ctx);
    if (sh.contains("phase")) m.shimmer_phase = detail::as_jitter(sh["phase"], ctx);
    if (sh.contains("tint")) m.shimmer_tint = detail::as_rgb(sh["tint"], ctx);
    if (sh.contains("noise") && !sh["noise"].is_null()) {
      const Json& nz = sh["noise"];
      detail::check_keys(nz, ctx + ".shimmer.noise",
                         {"octaves", "persistence", "patch_radius",
                          "radial_blur", "opacity"});
      if (nz.contains("octaves"))
        m.noise_octaves = static_cast<int>(detail::as_number(nz["octaves"], ctx));
      if (nz.contains("persistence"))
        m.noise_persistence = detail::as_number(nz["persistence"], ctx);
      m.noise_patch_radius =
          detail::as_jitter(detail::require(nz, "patch_radius", ctx), ctx);
      if (nz.contains("radial_blur"))
        m.noise_radial_blur = detail::as_jitter(nz["radial_blur"], ctx);
      m.noise_opacity = detail::as_jitter(detail::require(nz, "opacity", ctx), ctx);
    }
  }

  const Json& src = detail::require(j, "source", ctx);
  detail::check_keys(src, ctx + ".source",
                     {"shape", "sides", "rotation", "core_size", "glow_radius",
                      "glow_exponent", "tint"});
  if (src.contains("shape")) {
    std::string s = src["shape"].get<std::string>();
    if (s == "disk")
      m.source_shape = SourceSpec::Shape::Disk;
    else if (s == "polygon")
      m.source_shape = SourceSpec::Shape::Polygon;
    else
      throw FormatError(ctx + ".source.shape: expected \"disk\" or \"polygon\"");
  }
  if (src.contains("sides"))
    m.source_sides = static_cast<int>(detail::as_number(src["sides"], ctx));
  if (src.contains("rotation"))
    m.source_rotation = detail::as_jitter(src["rotation"], ctx);
  m.source_core = detail::as_jitter(detail::require(src, "core_size", ctx), ctx);
  m.source_glow_radius =
      detail::as_jitter(detail::require(src, "glow_radius", ctx), ctx);
  if (src.contains("glow_exponent"))
    m.source_glow_exponent = detail::as_jitter(src["glow_exponent"], ctx);
  if (src.contains("tint")) m.source_tint = detail::as_rgb(src["tint"], ctx);
  return m;
}

// Samples one template from the preset. The draw order is fixed, so a given
// (manifest, rng state) always produces the same template.
inline FlareTemplate render_scatter_template(const ScatterManifest& m,
                                             RngStream& rng) {
  const int canvas = m.canvas;
  const double lx = (canvas - 1) * 0.5;
  const double ly = (canvas - 1) * 0.5;

  double orientation = m.has_streak ? m.streak_orientation.sample(rng) : 0.0;

  GlareSpec glare;
  glare.radius = m.glare_radius.sample(rng);
  glare.curve = m.glare_curve;
  glare.vanishing_angle = m.vanishing_angle.sample(rng);
  glare.vanishing_feather = m.vanishing_feather.sample(rng);
  glare.streak_orientation = orientation;
  Image glare_img = build_glare(glare, canvas, canvas, lx, ly);

  Image streak_img(canvas, canvas, 3);
  if (m.has_streak) {
    StreakSpec st;
    st.orientation = orientation;
    st.length = m.streak_length.sample(rng);
    st.width_a = m.streak_width_a.sample(rng);
    st.width_b = m.streak_width_b.sample(rng);
    for (const auto& p : m.section_norm) {
      double px = p.pos >= 0.0 ? p.pos * st.width_a : p.pos * st.width_b;
      st.section.points.push_back({px, p.rgb});
    }
    if (m.edge_blur_auto) {
      auto blur = derive_edge_blur(st.section);
      st.blur_a = blur.first;
      st.blur_b = blur.second;
    } else {
      st.blur_a = std::max(m.edge_blur_a.sample(rng), kMinEdgeBlur);
      st.blur_b = std::max(m.edge_blur_b.sample(rng), kMinEdgeBlur);
    }
    streak_img = build_streak(st, canvas, canvas, lx, ly);
  }

  Image shimmer_img(canvas, canvas, 3);
  if (m.has_shimmer) {
    ShimmerSpec sh;
    sh.spike_count = m.spikes;
    sh.radius = m.shimmer_radius.sample(rng);
    sh.phase = m.shimmer_phase.sample(rng);
    sh.tint = m.shimmer_tint;
    for (int i = 0; i < m.spikes; ++i)
      sh.angular_profile.push_back(
          {m.spike_amplitude.sample(rng), m.spike_width.sample(rng)});
    sh.noise.octaves = m.noise_octaves;
    sh.noise.persistence = m.noise_persistence;
    sh.noise.patch_radius = m.noise_patch_radius.sample(rng);
    sh.noise.radial_blur_amount = m.noise_radial_blur.sample(rng);
    sh.noise.opacity = m.noise_opacity.sample(rng);
    shimmer_img = build_shimmer(sh, canvas, canvas, lx, ly, rng);
  }

  SourceSpec src;
  src.shape = m.source_shape;
  src.sides = m.source_sides;
  src.rotation = m.source_rotation.sample(rng);
  src.core_size = m.source_core.sample(rng);
  src.glow_radius = m.source_glow_radius.sample(rng);
  src.glow_exponent = m.source_glow_exponent.sample(rng);
  src.tint = m.source_tint;
  Image source_img = build_source(src, canvas, canvas, lx, ly);

  return compose_template(std::move(glare_img), std::move(streak_img),
                          std::move(shimmer_img), std::move(source_img), lx,
                          ly);
}

// Reflective-flare manifest ------------------------------------------------

struct ReflectIrisEntry {
  enum class Kind { Disk, Polygon, Lattice };
  Kind kind = Kind::Disk;
  int sides = 6;
  Jitter radius = Jitter::fixed(24.0);
  double softness = 0.25;
  double ring = 0.0;
  // lattice
  int rows = 1, cols = 1;
  Jitter cell_size = Jitter::fixed(8.0);
  Jitter cell_gap = Jitter::fixed(4.0);
  bool cell_disk = true;

  Jitter t = Jitter::fixed(0.5);
  Jitter scale = Jitter::fixed(1.0);
  Rgb tint{1, 1, 1};
  Jitter intensity = Jitter::fixed(0.5);
};

struct ReflectManifest {
  std::string name;
  int canvas = 1440;
  Jitter light_distance = Jitter::fixed(0.0);
  Jitter light_angle = Jitter::fixed(0.0);
  Jitter clip_threshold;
  double clip_mask_radius = 0.0;
  double clip_mask_feather = 0.0;
  Jitter caustics_gain = Jitter::fixed(0.0);
  double caustics_max_opacity = 0.0;
  double caustics_rings = 6.0;
  int caustics_size = 128;
  std::uint64_t caustics_seed = 1;
  double caustics_scale = 1.0;
  std::vector<ReflectIrisEntry> irises;
};

inline ReflectManifest parse_reflect_manifest(const Json& j,
                                              const std::string& ctx) {
  detail::check_keys(j, ctx,
                     {"schema", "name", "canvas", "light", "clip", "caustics",
                      "irises"});
  detail::check_schema(j, "reflect/1", ctx);

  ReflectManifest m;
  m.name = detail::require(j, "name", ctx).get<std::string>();
  if (j.contains("canvas"))
    m.canvas = static_cast<int>(detail::as_number(j["canvas"], ctx));
  check_arg(m.canvas >= 32, "canvas must be at least 32 px");
  m.clip_threshold = Jitter::fixed(m.canvas * 0.25);
  m.clip_mask_radius = m.canvas * 0.08;
  m.clip_mask_feather = m.clip_mask_radius / 3.0;

  const Json& light = detail::require(j, "light", ctx);
  detail::check_keys(light, ctx + ".light", {"distance", "angle"});
  m.light_distance =
      detail::as_jitter(detail::require(light, "distance", ctx), ctx);
  m.light_angle = detail::as_jitter(detail::require(light, "angle", ctx), ctx);

  if (j.contains("clip") && !j["clip"].is_null()) {
    const Json& clip = j["clip"];
    detail::check_keys(clip, ctx + ".clip",
                       {"threshold", "mask_radius", "mask_feather"});
    m.clip_threshold =
        detail::as_jitter(detail::require(clip, "threshold", ctx), ctx);
    m.clip_mask_radius =
        detail::as_number(detail::require(clip, "mask_radius", ctx), ctx);
    if (clip.contains("mask_feather"))
      m.clip_mask_feather = detail::as_number(clip["mask_feather"], ctx);
  }

  if (j.contains("caustics") && !j["caustics"].is_null()) {
    const Json& ca = j["caustics"];
    detail::check_keys(ca, ctx + ".caustics",
                       {"gain", "max_opacity", "rings", "size", "seed",
                        "scale"});
    m.caustics_gain = detail::as_jitter(detail::require(ca, "gain", ctx), ctx);
    m.caustics_max_opacity =
        detail::as_number(detail::require(ca, "max_opacity", ctx), ctx);
    if (ca.contains("rings")) m.caustics_rings = detail::as_number(ca["rings"], ctx);
    if (ca.contains("size"))
      m.caustics_size = static_cast<int>(detail::as_number(ca["size"], ctx));
    if (ca.contains("seed"))
      m.caustics_seed =
          static_cast<std::uint64_t>(detail::as_number(ca["seed"], ctx));
    if (ca.contains("scale"))
      m.caustics_scale = detail::as_number(ca["scale"], ctx);
  }

  const Json& irises = detail::require(j, "irises", ctx);
  if (!irises.is_array() || irises.empty())
    throw FormatError(ctx + ".irises: expected a non-empty array");
  for (const auto& e : irises) {
    detail::check_keys(e, ctx + ".irises[]",
                       {"kind", "sides", "radius", "softness", "ring", "rows",
                        "cols", "cell_size", "cell_gap", "cell_shape", "t",
                        "scale", "tint", "intensity"});
    ReflectIrisEntry entry;
    std::string kind = detail::require(e, "kind", ctx).get<std::string>();
    if (kind == "disk")
      entry.kind = ReflectIrisEntry::Kind::Disk;
    else if (kind == "polygon")
      entry.kind = ReflectIrisEntry::Kind::Polygon;
    else if (kind == "lattice")
      entry.kind = ReflectIrisEntry::Kind::Lattice;
    else
      throw FormatError(ctx + ".irises[].kind: expected disk|polygon|lattice");
    if (e.contains("sides"))
      entry.sides = static_cast<int>(detail::as_number(e["sides"], ctx));
    if (e.contains("radius")) entry.radius = detail::as_jitter(e["radius"], ctx);
    if (e.contains("softness"))
      entry.softness = detail::as_number(e["softness"], ctx);
    if (e.contains("ring")) entry.ring = detail::as_number(e["ring"], ctx);
    if (e.contains("rows"))
      entry.rows = static_cast<int>(detail::as_number(e["rows"], ctx));
    if (e.contains("cols"))
      entry.cols = static_cast<int>(detail::as_number(e["cols"], ctx));
    if (e.contains("cell_size"))
      entry.cell_size = detail::as_jitter(e["cell_size"], ctx);
    if (e.contains("cell_gap"))
      entry.cell_gap = detail::as_jitter(e["cell_gap"], ctx);
    if (e.contains("cell_shape")) {
      std::string s = e["cell_shape"].get<std::string>();
      if (s == "disk")
        entry.cell_disk = true;
      else if (s == "square")
        entry.cell_disk = false;
      else
        throw FormatError(ctx + ".irises[].cell_shape: expected disk|square");
    }
    entry.t = detail::as_jitter(detail::require(e, "t", ctx), ctx);
    if (e.contains("scale")) entry.scale = detail::as_jitter(e["scale"], ctx);
    if (e.contains("tint")) entry.tint = detail::as_rgb(e["tint"], ctx);
    if (e.contains("intensity"))
      entry.intensity = detail::as_jitter(e["intensity"], ctx);
    m.irises.push_back(entry);
  }
  return m;
}

struct ReflectSample {
  IrisChain chain;
  double light_x = 0.0;
  double light_y = 0.0;
};

inline ReflectSample sample_reflect_chain(const ReflectManifest& m,
                                          RngStream& rng) {
  ReflectSample out;
  out.chain.center_x = (m.canvas - 1) * 0.5;
  out.chain.center_y = (m.canvas - 1) * 0.5;
  double dist = m.light_distance.sample(rng);
  double angle = m.light_angle.sample(rng);
  out.light_x = out.chain.center_x + dist * std::cos(angle);
  out.light_y = out.chain.center_y + dist * std::sin(angle);
  out.chain.clip_threshold = std::max(1.0, m.clip_threshold.sample(rng));
  out.chain.clip_mask = {m.clip_mask_radius, m.clip_mask_feather};
  if (m.caustics_max_opacity > 0.0) {
    out.chain.caustics.pattern =
        render_caustics_pattern(m.caustics_size, m.caustics_rings,
                                m.caustics_seed);
    out.chain.caustics.gain = m.caustics_gain.sample(rng);
    out.chain.caustics.max_opacity = m.caustics_max_opacity;
    out.chain.caustics.scale = m.caustics_scale;
  }
  for (const auto& e : m.irises) {
    Iris iris;
    if (e.kind == ReflectIrisEntry::Kind::Lattice) {
      MatrixLightSpec spec;
      spec.rows = e.rows;
      spec.cols = e.cols;
      spec.cell_size = e.cell_size.sample(rng);
      spec.cell_gap = e.cell_gap.sample(rng);
      spec.cell_shape = e.cell_disk ? MatrixLightSpec::CellShape::Disk
                                    : MatrixLightSpec::CellShape::Square;
      iris = render_lattice_iris(spec);
    } else {
      int sides = e.kind == ReflectIrisEntry::Kind::Disk ? 0 : e.sides;
      iris.patch = render_iris_patch(sides, e.radius.sample(rng), e.softness,
                                     e.ring);
    }
    iris.t = e.t.sample(rng);
    iris.scale = e.scale.sample(rng);
    double gain = e.intensity.sample(rng);
    iris.tint = {e.tint[0] * gain, e.tint[1] * gain, e.tint[2] * gain};
    out.chain.irises.push_back(std::move(iris));
  }
  return out;
}

inline Image render_reflect_template(const ReflectManifest& m,
                                     RngStream& rng) {
  ReflectSample sample = sample_reflect_chain(m, rng);
  return render_reflective(sample.chain, sample.light_x, sample.light_y,
                           m.canvas, m.canvas);
}

// Aperture manifest ----------------------------------------------------------

struct ApertureManifest {
  std::string name;
  ApertureSpec spec;
  double pitch = 0.0;  // meters; 0 means derive from the grid size
};

inline ApertureManifest parse_aperture_manifest(const Json& j,
                                                const std::string& ctx) {
  detail::check_keys(j, ctx,
                     {"schema", "name", "clear_radius", "pitch", "polygon",
                      "dirt"});
  detail::check_schema(j, "aperture/1", ctx);
  ApertureManifest m;
  m.name = detail::require(j, "name", ctx).get<std::string>();
  m.spec.clear_radius =
      detail::as_number(detail::require(j, "clear_radius", ctx), ctx);
  if (j.contains("pitch")) m.pitch = detail::as_number(j["pitch"], ctx);
  if (j.contains("polygon") && !j["polygon"].is_null()) {
    const Json& poly = j["polygon"];
    detail::check_keys(poly, ctx + ".polygon", {"sides", "rotation"});
    PolygonStop stop;
    stop.sides = static_cast<int>(
        detail::as_number(detail::require(poly, "sides", ctx), ctx));
    if (poly.contains("rotation"))
      stop.rotation = detail::as_number(poly["rotation"], ctx);
    m.spec.polygon = stop;
  }
  if (j.contains("dirt")) {
    if (!j["dirt"].is_array()) throw FormatError(ctx + ".dirt: expected array");
    for (const auto& d : j["dirt"]) {
      std::string kind = detail::require(d, "kind", ctx).get<std::string>();
      if (kind == "disk") {
        detail::check_keys(d, ctx + ".dirt[]", {"kind", "center", "radius"});
        const Json& c = detail::require(d, "center", ctx);
        if (!c.is_array() || c.size() != 2)
          throw FormatError(ctx + ".dirt[].center: expected [x, y]");
        m.spec.dirt.push_back(DirtPrimitive::disk(
            detail::as_number(c[0], ctx), detail::as_number(c[1], ctx),
            detail::as_number(detail::require(d, "radius", ctx), ctx)));
      } else if (kind == "segment") {
        detail::check_keys(d, ctx + ".dirt[]", {"kind", "p0", "p1", "width"});
        const Json& p0 = detail::require(d, "p0", ctx);
        const Json& p1 = detail::require(d, "p1", ctx);
        if (!p0.is_array() || p0.size() != 2 || !p1.is_array() || p1.size() != 2)
          throw FormatError(ctx + ".dirt[]: p0/p1 must be [x, y]");
        m.spec.dirt.push_back(DirtPrimitive::segment(
            detail::as_number(p0[0], ctx), detail::as_number(p0[1], ctx),
            detail::as_number(p1[0], ctx), detail::as_number(p1[1], ctx),
            detail::as_number(detail::require(d, "width", ctx), ctx)));
      } else if (kind == "grating") {
        detail::check_keys(d, ctx + ".dirt[]",
                           {"kind", "orientation", "period", "duty", "extent"});
        m.spec.dirt.push_back(DirtPrimitive::grating(
            detail::as_number(detail::require(d, "orientation", ctx), ctx),
            detail::as_number(detail::require(d, "period", ctx), ctx),
            detail::as_number(detail::require(d, "duty", ctx), ctx),
            detail::as_number(detail::require(d, "extent", ctx), ctx)));
      } else {
        throw FormatError(ctx + ".dirt[].kind: expected disk|segment|grating");
      }
    }
  }
  return m;
}

// Loading ---------------------------------------------------------------------

inline ScatterManifest load_scatter_manifest(const std::string& path) {
  return parse_scatter_manifest(detail::parse_json_file(path), path);
}

inline ReflectManifest load_reflect_manifest(const std::string& path) {
  return parse_reflect_manifest(detail::parse_json_file(path), path);
}

inline ApertureManifest load_aperture_manifest(const std::string& path) {
  return parse_aperture_manifest(detail::parse_json_file(path), path);
}

// All *.json files in a directory, sorted by filename for stable ordering.
inline std::vector<std::string> list_manifest_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json")
      paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  return paths;
}

}  // namespace flare
