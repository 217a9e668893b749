#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "flare/manifest.hpp"

using namespace flare;
namespace fs = std::filesystem;

namespace {

const char* kScatterJson = R"({
  "schema": "scatter/1",
  "name": "test_type",
  "canvas": 256,
  "glare": {
    "radius": [40, 80],
    "curve": [[0.0, [1.0, 0.9, 0.8]], [0.3, [0.4, 0.3, 0.2]], [1.0, [0, 0, 0]]],
    "vanishing_angle": [0.0, 0.5],
    "vanishing_feather": 0.2
  },
  "streak": {
    "orientation": [0.0, 6.283185307],
    "length": [60, 100],
    "width_a": [2, 4],
    "width_b": [5, 9],
    "section": [[-1.0, [0,0,0]], [0.0, [1,1,1]], [1.0, [0,0,0]]],
    "edge_blur": "auto"
  },
  "shimmer": {
    "spikes": 10,
    "amplitude": [0.2, 0.5],
    "width": [0.02, 0.06],
    "radius": [50, 90],
    "noise": {"octaves": 3, "persistence": 0.5, "patch_radius": [20, 40], "opacity": [0.1, 0.3]}
  },
  "source": {
    "shape": "polygon",
    "sides": 6,
    "core_size": [4, 8],
    "glow_radius": [12, 24],
    "tint": [1.0, 0.95, 0.9]
  }
})";

const char* kReflectJson = R"({
  "schema": "reflect/1",
  "name": "test_chain",
  "canvas": 256,
  "light": {"distance": [20, 100], "angle": [0, 6.283185307]},
  "clip": {"threshold": 60, "mask_radius": 40, "mask_feather": 12},
  "caustics": {"gain": [0.001, 0.002], "max_opacity": 0.5, "size": 64, "seed": 4},
  "irises": [
    {"kind": "disk", "radius": [8, 14], "t": [0.3, 0.9], "tint": [0.4, 0.5, 0.9], "intensity": [0.2, 0.5]},
    {"kind": "lattice", "rows": 2, "cols": 3, "cell_size": 6, "cell_gap": 4, "t": 1.2, "intensity": 0.4}
  ]
})";

std::string write_temp(const std::string& text, const char* name) {
  fs::path dir = fs::temp_directory_path() /
                 ("flare_manifest_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("scatter manifest parses and renders") {
  ScatterManifest m = parse_scatter_manifest(Json::parse(kScatterJson), "test");
  CHECK(m.name == "test_type");
  CHECK(m.canvas == 256);
  CHECK(m.glare_radius.lo == 40);
  CHECK(m.glare_radius.hi == 80);
  CHECK(m.has_streak);
  CHECK(m.has_shimmer);
  CHECK(m.spikes == 10);
  CHECK(m.source_shape == SourceSpec::Shape::Polygon);

  RngStream rng{81};
  FlareTemplate tpl = render_scatter_template(m, rng);
  CHECK(tpl.composite.width == 256);
  double total = 0.0;
  for (float v : tpl.composite.data) total += v;
  CHECK(total > 0.0);

  RngStream rng2{81};
  FlareTemplate tpl2 = render_scatter_template(m, rng2);
  CHECK(tpl.composite.data == tpl2.composite.data);  // template determinism
  CHECK(tpl.glare.data == tpl2.glare.data);
  CHECK(tpl.streak.data == tpl2.streak.data);
}

TEST_CASE("reflect manifest parses and renders") {
  ReflectManifest m = parse_reflect_manifest(Json::parse(kReflectJson), "test");
  CHECK(m.name == "test_chain");
  REQUIRE(m.irises.size() == 2);
  CHECK(m.irises[1].kind == ReflectIrisEntry::Kind::Lattice);
  CHECK(m.irises[1].rows == 2);

  RngStream rng{82};
  Image img = render_reflect_template(m, rng);
  CHECK(img.width == 256);
  double total = 0.0;
  for (float v : img.data) total += v;
  CHECK(total > 0.0);
}

TEST_CASE("unknown keys are rejected with the key name") {
  Json j = Json::parse(kScatterJson);
  j["surprise"] = 1;
  try {
    parse_scatter_manifest(j, "test");
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("surprise") != std::string::npos);
  }

  Json nested = Json::parse(kScatterJson);
  nested["glare"]["radius_px"] = 4;
  CHECK_THROWS_AS(parse_scatter_manifest(nested, "test"), FormatError);
}

TEST_CASE("schema versions are enforced") {
  Json j = Json::parse(kScatterJson);
  j["schema"] = "scatter/2";
  CHECK_THROWS_AS(parse_scatter_manifest(j, "test"), FormatError);
  Json r = Json::parse(kReflectJson);
  r["schema"] = "scatter/1";
  CHECK_THROWS_AS(parse_reflect_manifest(r, "test"), FormatError);
}

TEST_CASE("malformed json reports the line number") {
  std::string broken = "{\n  \"schema\": \"scatter/1\",\n  \"name\" oops\n}\n";
  std::string path = write_temp(broken, "broken.json");
  try {
    load_scatter_manifest(path);
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("jitter ranges sample inside their closed interval") {
  Json j = Json::parse(kScatterJson);
  ScatterManifest m = parse_scatter_manifest(j, "test");
  RngStream rng{83};
  for (int i = 0; i < 2000; ++i) {
    double v = m.glare_radius.sample(rng);
    CHECK(v >= 40.0);
    CHECK(v <= 80.0);
  }
  CHECK_THROWS_AS(detail::as_jitter(Json::parse("[5, 2]"), "ctx"), FormatError);
  CHECK_THROWS_AS(detail::as_jitter(Json::parse("\"x\""), "ctx"), FormatError);
  CHECK(detail::as_jitter(Json::parse("3.5"), "ctx").lo == 3.5);
}

TEST_CASE("aperture manifest parses all dirt kinds") {
  const char* text = R"({
    "schema": "aperture/1",
    "name": "dusty",
    "clear_radius": 0.004,
    "pitch": 3.2e-5,
    "polygon": {"sides": 8, "rotation": 0.1},
    "dirt": [
      {"kind": "disk", "center": [0.001, -0.0005], "radius": 0.0004},
      {"kind": "segment", "p0": [-0.002, 0.001], "p1": [0.0015, -0.001], "width": 0.00008},
      {"kind": "grating", "orientation": 1.2, "period": 0.0003, "duty": 0.4, "extent": 0.0035}
    ]
  })";
  ApertureManifest m = parse_aperture_manifest(Json::parse(text), "test");
  CHECK(m.name == "dusty");
  CHECK(m.spec.clear_radius == 0.004);
  REQUIRE(m.spec.polygon.has_value());
  CHECK(m.spec.polygon->sides == 8);
  REQUIRE(m.spec.dirt.size() == 3);
  CHECK(m.spec.dirt[0].kind == DirtPrimitive::Kind::Disk);
  CHECK(m.spec.dirt[1].kind == DirtPrimitive::Kind::Segment);
  CHECK(m.spec.dirt[2].kind == DirtPrimitive::Kind::Grating);

  GridGeometry grid{512, m.pitch};
  Image mask = rasterize_aperture(m.spec, grid);
  double count = 0;
  for (float v : mask.data) count += v;
  CHECK(count > 0.0);
}

TEST_CASE("missing files and directories surface as io errors") {
  CHECK_THROWS_AS(load_scatter_manifest("/nonexistent/path.json"), IoError);
  CHECK_THROWS_AS(list_manifest_files("/nonexistent/dir"), IoError);
}
