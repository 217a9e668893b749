#include <catch2/catch_amalgamated.hpp>

#include "flare/scatter.hpp"
#include "oracles.hpp"

using namespace flare;

namespace {

GlareCurve white_to_black() {
  GlareCurve c;
  c.points = {{0.0, {1, 1, 1}}, {1.0, {0, 0, 0}}};
  return c;
}

SectionCurve gaussian_section(double sigma, double extent, double step = 1.0) {
  SectionCurve c;
  for (double p = -extent; p <= extent + 1e-9; p += step) {
    double v = std::exp(-0.5 * p * p / (sigma * sigma));
    c.points.push_back({p, {v, v, v}});
  }
  return c;
}

}  // namespace

TEST_CASE("build_glare: radial symmetry and center value") {
  GlareSpec spec;
  spec.radius = 40.0;
  spec.curve = white_to_black();
  Image img = build_glare(spec, 101, 101, 50.0, 50.0);

  CHECK(img.at(50, 50, 0) == 1.0f);  // curve value at d=0

  // every pixel carries the curve value of its own exact distance, so all
  // pixels at equal radius agree by construction
  for (int y = 0; y < 101; ++y)
    for (int x = 0; x < 101; ++x) {
      double d = std::hypot(x - 50.0, y - 50.0) / 40.0;
      float expect = d >= 1.0 ? 0.0f : static_cast<float>(1.0 - d);
      CHECK(std::abs(img.at(x, y, 1) - expect) < 1e-6f);
    }

  // zero beyond the radius
  CHECK(img.at(50, 95, 0) == 0.0f);
}

TEST_CASE("build_glare: monotone curve gives radially non-increasing rays") {
  GlareSpec spec;
  spec.radius = 45.0;
  GlareCurve c;
  c.points = {{0.0, {1, 0.9, 0.8}}, {0.3, {0.5, 0.4, 0.3}}, {1.0, {0, 0, 0}}};
  spec.curve = c;
  Image img = build_glare(spec, 101, 101, 50.0, 50.0);
  for (double ang = 0.1; ang < 2.0 * kPi; ang += 0.37) {
    double prev = 1e9;
    for (double r = 0.0; r < 45.0; r += 1.0) {
      int x = static_cast<int>(std::lround(50.0 + r * std::cos(ang)));
      int y = static_cast<int>(std::lround(50.0 + r * std::sin(ang)));
      double v = img.at(x, y, 0);
      CHECK(v <= prev + 0.5 / 45.0 + 1e-6);  // allow rounding slack
      prev = v;
    }
  }
}

TEST_CASE("build_glare rejects bad inputs") {
  GlareSpec spec;
  spec.radius = 10.0;
  spec.curve = white_to_black();
  CHECK_THROWS_AS(build_glare(spec, 32, 32, 40.0, 16.0),
                  std::invalid_argument);  // light outside canvas
  GlareCurve bad;
  bad.points = {{0.0, {1, 1, 1}}, {1.0, {0.2f, 0, 0}}};  // nonzero at d=1
  spec.curve = bad;
  CHECK_THROWS_AS(build_glare(spec, 32, 32, 16, 16), std::invalid_argument);
}

TEST_CASE("vanishing corner mask") {
  SECTION("theta 0 is the identity") {
    RngStream rng{41};
    Image img = oracle::random_image(32, 32, 3, rng);
    Image out = apply_vanishing_corner(img, 0.0, 0.2, 0.5, 16, 16);
    CHECK(out.data == img.data);
  }
  SECTION("pi/2 wedge: axis suppressed, perpendicular untouched") {
    Image img(101, 101, 3, 1.0f);
    Image out = apply_vanishing_corner(img, kPi / 2, 1e-6, 0.0, 50, 50);
    CHECK(out.at(90, 50, 0) == 0.0f);   // on the +x axis
    CHECK(out.at(10, 50, 0) == 0.0f);   // opposite direction
    CHECK(out.at(50, 90, 0) == 1.0f);   // perpendicular
    CHECK(out.at(50, 10, 0) == 1.0f);
  }
  SECTION("weight matches the closed-form wedge + cosine evaluation") {
    const double theta = 0.6, feather = 0.25, orient = 0.8;
    for (double angle = -kPi; angle < kPi; angle += 0.1) {
      double got = vanishing_corner_weight(angle, theta, feather, orient);
      // independent evaluation
      auto wrap = [](double a) {
        while (a > kPi) a -= 2 * kPi;
        while (a < -kPi) a += 2 * kPi;
        return a;
      };
      double dist = std::min(std::abs(wrap(angle - orient)),
                             std::abs(wrap(angle - orient - kPi)));
      double expect;
      if (dist <= theta / 2)
        expect = 0.0;
      else if (dist >= theta / 2 + feather)
        expect = 1.0;
      else
        expect = 0.5 * (1 - std::cos(kPi * (dist - theta / 2) / feather));
      CHECK(got == Catch::Approx(expect).margin(1e-12));
    }
  }
}

TEST_CASE("derive_edge_blur") {
  SECTION("symmetric triangle gives equal blurs") {
    SectionCurve c;
    c.points = {{-8, {0, 0, 0}}, {0, {1, 1, 1}}, {8, {0, 0, 0}}};
    auto [a, b] = derive_edge_blur(c);
    CHECK(a == Catch::Approx(b));
    CHECK(a == Catch::Approx(4.0));  // linear ramp crosses half at 4 px
  }
  SECTION("one-sided step: sharp side clamps to the minimum") {
    SectionCurve c;
    c.points = {{-6, {0, 0, 0}},
                {-3, {0.5, 0.5, 0.5}},
                {0, {1, 1, 1}},
                {0.5, {0, 0, 0}},
                {6, {0, 0, 0}}};
    auto [a, b] = derive_edge_blur(c);
    CHECK(a == kMinEdgeBlur);  // crossing at 0.25 px clamps to 0.5
    CHECK(b == Catch::Approx(3.0));
  }
  SECTION("gaussian profile: half-life = sigma * sqrt(2 ln 2)") {
    auto [a, b] = derive_edge_blur(gaussian_section(4.0, 16.0));
    double expect = 4.0 * std::sqrt(2.0 * std::log(2.0));
    CHECK(a == Catch::Approx(expect).epsilon(0.02));
    CHECK(b == Catch::Approx(expect).epsilon(0.02));
  }
  SECTION("no crossing falls back to the side extent") {
    SectionCurve c;
    c.points = {{-5, {0, 0, 0}}, {0, {1, 1, 1}}, {4, {0.8, 0.8, 0.8}}};
    auto [a, b] = derive_edge_blur(c);
    CHECK(a == Catch::Approx(4.0));  // side extent
    CHECK(b == Catch::Approx(2.5));  // interpolated crossing
  }
}

TEST_CASE("build_streak") {
  StreakSpec spec;
  spec.orientation = 0.0;
  spec.length = 60.0;
  spec.width_a = 4.0;
  spec.width_b = 4.0;
  spec.section = gaussian_section(3.0, 12.0);
  spec.blur_a = 1.0;
  spec.blur_b = 1.0;

  SECTION("symmetric spec gives a symmetric cross-section") {
    Image img = build_streak(spec, 129, 129, 64.0, 64.0);
    for (int dv = 1; dv < 12; ++dv)
      CHECK(std::abs(img.at(64, 64 + dv, 0) - img.at(64, 64 - dv, 0)) < 1e-6f);
  }

  SECTION("sharper edge has the steeper gradient") {
    StreakSpec sharp = spec;
    sharp.blur_a = 0.6;
    sharp.blur_b = 3.0;
    sharp.section = gaussian_section(6.0, 18.0);
    Image img = build_streak(sharp, 129, 129, 64.0, 64.0);
    // finite-difference slope across each long edge at the light column
    auto slope_at = [&](double v) {
      return std::abs(img.at(64, 64 + int(v), 0) -
                      img.at(64, 64 + int(v) + 1, 0));
    };
    double grad_a = slope_at(+4);   // side a edge near width_a
    double grad_b = slope_at(-5);   // side b edge
    CHECK(grad_a > grad_b);
  }

  SECTION("orientation rotated by pi gives the identical image") {
    StreakSpec asym = spec;
    asym.orientation = 0.4;
    asym.width_a = 2.0;
    asym.width_b = 7.0;
    asym.blur_b = 2.0;
    Image img1 = build_streak(asym, 129, 129, 64.0, 64.0);
    StreakSpec turned = asym;
    turned.orientation = 0.4 + kPi;
    Image img2 = build_streak(turned, 129, 129, 64.0, 64.0);
    CHECK(oracle::max_abs_diff(img1, img2) < 1e-6);
  }

  SECTION("cross-section through the light reproduces the blurred section") {
    Image img = build_streak(spec, 129, 129, 64.0, 64.0);
    for (int dv = -10; dv <= 10; ++dv) {
      double expect =
          spec.section.eval(dv)[0] *
          (dv >= 0 ? 0.5 * std::erfc((dv - spec.width_a) /
                                     (spec.blur_a * std::sqrt(2.0)))
                   : 0.5 * std::erfc((-dv - spec.width_b) /
                                     (spec.blur_b * std::sqrt(2.0))));
      CHECK(img.at(64, 64 + dv, 0) == Catch::Approx(expect).margin(1e-6));
    }
  }
}

TEST_CASE("build_shimmer") {
  ShimmerSpec spec;
  spec.spike_count = 8;
  spec.radius = 40.0;
  spec.angular_profile.assign(8, {0.8, 0.2});

  SECTION("uniform spikes are invariant under rotation by one sector") {
    RngStream rng{42};
    Image img = build_shimmer(spec, 129, 129, 64.0, 64.0, rng);
    // compare pixel (r, ang) against (r, ang + 2pi/8) via resampling;
    // start where a spike's angular arc spans a few pixels, closer in
    // the pattern is narrower than the bilinear footprint
    double max_err = 0.0;
    for (double r = 10.0; r < 38.0; r += 2.5)
      for (double ang = 0.0; ang < 2.0 * kPi; ang += 0.17) {
        double x1 = 64 + r * std::cos(ang), y1 = 64 + r * std::sin(ang);
        double x2 = 64 + r * std::cos(ang + kPi / 4),
               y2 = 64 + r * std::sin(ang + kPi / 4);
        double v1 = detail::bilinear_zero(img, x1, y1, 0);
        double v2 = detail::bilinear_zero(img, x2, y2, 0);
        max_err = std::max(max_err, std::abs(v1 - v2));
      }
    CHECK(max_err < 0.05);  // resampling tolerance
  }

  SECTION("zero profile gives a black image") {
    ShimmerSpec quiet;
    quiet.spike_count = 4;
    quiet.radius = 30.0;
    quiet.angular_profile.assign(4, {0.0, 0.05});
    RngStream rng{43};
    Image img = build_shimmer(quiet, 65, 65, 32.0, 32.0, rng);
    for (float v : img.data) CHECK(v == 0.0f);
  }

  SECTION("seed changes only move pixels inside the noise patch") {
    ShimmerSpec noisy = spec;
    noisy.noise.patch_radius = 12.0;
    noisy.noise.opacity = 0.5;
    RngStream r1{7}, r1b{7}, r2{8};
    Image a = build_shimmer(noisy, 129, 129, 64.0, 64.0, r1);
    Image a2 = build_shimmer(noisy, 129, 129, 64.0, 64.0, r1b);
    Image b = build_shimmer(noisy, 129, 129, 64.0, 64.0, r2);
    CHECK(a.data == a2.data);  // same seed, identical

    double outside_diff = 0.0;
    bool inside_differs = false;
    for (int y = 0; y < 129; ++y)
      for (int x = 0; x < 129; ++x) {
        double d = std::abs(a.at(x, y, 0) - b.at(x, y, 0));
        double rho = std::hypot(x - 64.0, y - 64.0);
        if (rho >= noisy.noise.patch_radius)
          outside_diff = std::max(outside_diff, d);
        else if (d > 1e-6)
          inside_differs = true;
      }
    CHECK(outside_diff == 0.0);
    CHECK(inside_differs);
  }
}

TEST_CASE("build_source") {
  SourceSpec spec;
  spec.core_size = 6.0;
  spec.glow_radius = 20.0;
  spec.glow_exponent = 2.0;

  Image img = build_source(spec, 65, 65, 32.0, 32.0);

  SECTION("center and core at exactly 1") {
    CHECK(img.at(32, 32, 0) == 1.0f);
    CHECK(img.at(35, 32, 1) == 1.0f);
  }
  SECTION("radially non-increasing outside the core") {
    for (double ang = 0.0; ang < 2 * kPi; ang += 0.31) {
      double prev = 2.0;
      for (double r = 0.0; r < 30.0; r += 0.5) {
        float v = detail::bilinear_zero(
            img, 32 + r * std::cos(ang), 32 + r * std::sin(ang), 0);
        CHECK(v <= prev + 1e-6);
        prev = v;
      }
    }
  }
  SECTION("zero glow radius leaves only the hard core") {
    SourceSpec hard = spec;
    hard.glow_radius = 0.0;
    Image h = build_source(hard, 65, 65, 32.0, 32.0);
    CHECK(h.at(32, 32, 0) == 1.0f);
    CHECK(h.at(32 + 8, 32, 0) == 0.0f);
  }
}

TEST_CASE("compose_template") {
  const int n = 64;
  RngStream rng{44};

  SECTION("all layers zero gives a black template") {
    FlareTemplate tpl = compose_template(Image(n, n, 3), Image(n, n, 3),
                                         Image(n, n, 3), Image(n, n, 3), 32,
                                         32);
    for (float v : tpl.composite.data) CHECK(v == 0.0f);
  }

  SECTION("source-only composite equals the source") {
    SourceSpec src;
    src.core_size = 5.0;
    src.glow_radius = 12.0;
    Image source = build_source(src, n, n, 32.0, 32.0);
    FlareTemplate tpl = compose_template(Image(n, n, 3), Image(n, n, 3),
                                         Image(n, n, 3), source, 32, 32);
    CHECK(oracle::max_abs_diff(tpl.composite, source) == 0.0);
  }

  SECTION("composite dominates every clipped layer pointwise") {
    Image glare = oracle::random_image(n, n, 3, rng, 0.0f, 0.6f);
    Image streak = oracle::random_image(n, n, 3, rng, 0.0f, 0.4f);
    Image shimmer = oracle::random_image(n, n, 3, rng, 0.0f, 0.3f);
    Image source = oracle::random_image(n, n, 3, rng, 0.0f, 1.0f);
    FlareTemplate tpl = compose_template(glare, streak, shimmer, source, 32, 32);
    for (std::size_t i = 0; i < tpl.composite.data.size(); ++i) {
      CHECK(tpl.composite.data[i] >= source.data[i] - 1e-7f);
      CHECK(tpl.composite.data[i] + 1e-7f >=
            std::min(1.0f, glare.data[i]));
    }
  }

  SECTION("layer additivity: screen algebra recovers the clipped sum") {
    Image glare = oracle::random_image(n, n, 3, rng, 0.0f, 0.7f);
    Image streak = oracle::random_image(n, n, 3, rng, 0.0f, 0.5f);
    Image shimmer = oracle::random_image(n, n, 3, rng, 0.0f, 0.4f);
    Image source = oracle::random_image(n, n, 3, rng, 0.0f, 0.9f);
    FlareTemplate tpl = compose_template(glare, streak, shimmer, source, 32, 32);
    for (std::size_t i = 0; i < tpl.composite.data.size(); ++i) {
      float sum = std::min(
          1.0f, glare.data[i] + streak.data[i] + shimmer.data[i]);
      float recovered =
          tpl.composite.data[i] - source.data[i] * (1.0f - sum);
      CHECK(std::abs(recovered - sum) < 1e-6f);
    }
  }

  SECTION("saturated glare outside the source core is rejected") {
    Image glare(n, n, 3, 0.0f);
    glare.at(10, 10, 0) = glare.at(10, 10, 1) = glare.at(10, 10, 2) = 1.0f;
    Image source(n, n, 3, 0.0f);  // no core anywhere
    CHECK_THROWS_AS(compose_template(glare, Image(n, n, 3), Image(n, n, 3),
                                     source, 32, 32),
                    std::invalid_argument);
  }

  SECTION("canvas mismatch is rejected") {
    CHECK_THROWS_AS(compose_template(Image(n, n, 3), Image(32, 32, 3),
                                     Image(n, n, 3), Image(n, n, 3), 16, 16),
                    std::invalid_argument);
  }
}
