#include <doctest.h>

#include <cmath>

#include "convolve.hpp"
#include "oracles.hpp"
#include "retinexad/error.hpp"
#include "retinexad/enhancers.hpp"
#include "retinexad/metrics.hpp"
#include "synthetic.hpp"

using namespace retinexad;
using testsupport::random_plane;

namespace {

double max_abs_diff(const Plane& a, const Plane& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

bool in_unit(const Plane& p) {
  for (double v : p.values())
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

}  // namespace

TEST_CASE("config validation") {
  EnhancerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.msr_scales = {2, 8};
  cfg.msr_weights = {0.5};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.msr_weights = {0.5, 0.6};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.msr_weights = {0.25, 0.75};
  CHECK_NOTHROW(cfg.validate());
  cfg.clahe_clip = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.clahe_clip = 1.0;
  cfg.bins = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("default MSR scales follow the image size") {
  const auto s = resolved_msr_scales(EnhancerConfig{}, 300, 120);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(10.0));
  CHECK(s[2] == doctest::Approx(40.0));
}

TEST_CASE("global_he") {
  for (double v : testsupport::samples(global_he(Plane(9, 9, 0.4)))) CHECK(v == 0.4);

  Plane two(10, 10, 0.0);
  for (int y = 5; y < 10; ++y)
    for (int x = 0; x < 10; ++x) two(x, y) = 1.0;
  const Plane he = global_he(two);
  CHECK(he(0, 0) == 0.5);
  CHECK(he(0, 9) == 1.0);

  for (std::uint32_t seed = 1; seed <= 5; ++seed) {
    const Plane p = testsupport::quantize(random_plane(40, 30, seed, 0.2, 0.6));
    CHECK(max_abs_diff(global_he(p), oracle::global_he(p)) < 1e-12);
    // the CDF map can only merge bins, never split them
    CHECK(entropy(global_he(p)) <= entropy(p) + 1e-9);
    CHECK(in_unit(global_he(p)));
  }
}

TEST_CASE("clahe") {
  for (double v : testsupport::samples(clahe(Plane(32, 32, 0.3), TileGrid{}, 0.01))) CHECK(v == 0.3);
  CHECK_THROWS_WITH_AS(clahe(Plane(4, 4, 0.1), TileGrid{8, 8}, 0.01), "invalid tiling", InvalidArgument);

  for (std::uint32_t seed = 1; seed <= 6; ++seed) {
    const Plane p = random_plane(37 + seed, 29, seed);
    CHECK(max_abs_diff(clahe(p, TileGrid{1, 1}, 1.0), global_he(p)) < 1e-9);
    CHECK(in_unit(clahe(p, TileGrid{4, 3}, 0.02)));
    CHECK(in_unit(clahe(p, TileGrid{8, 8}, 0.01)));
  }
}

TEST_CASE("gaussian_surround") {
  for (double v : testsupport::samples(gaussian_surround(Plane(20, 15, 0.6), 3.0))) CHECK(v == doctest::Approx(0.6));
  const Plane p = random_plane(25, 19, 4);
  CHECK(gaussian_surround(p, 0.0) == p);

  Plane impulse(41, 41, 0.0);
  impulse(20, 20) = 1.0;
  CHECK(max_abs_diff(gaussian_surround(impulse, 2.5), oracle::gaussian_dense(impulse, 2.5)) < 1e-10);

  // wide kernel: exercises the FFT row path
  const Plane q = random_plane(50, 40, 5);
  CHECK(max_abs_diff(gaussian_surround(q, 12.0), oracle::gaussian_dense(q, 12.0)) < 1e-10);
  CHECK(max_abs_diff(gaussian_surround(q, 1.3), oracle::gaussian_dense(q, 1.3)) < 1e-10);
}

TEST_CASE("FFT and direct row convolution agree") {
  const Plane p = random_plane(97, 6, 8);
  const auto k = detail::gaussian_kernel(15.0);
  REQUIRE(k.size() > 65);
  Plane direct(p.width(), p.height());
  const int r = static_cast<int>(k.size() / 2);
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[static_cast<std::size_t>(i + r)] * p(std::clamp(x + i, 0, p.width() - 1), y);
      direct(x, y) = s;
    }
  }
  CHECK(max_abs_diff(detail::convolve_rows(p, k), direct) < 1e-12);
}

TEST_CASE("gaussian_surround preserves the mean on interior-dominated images") {
  Plane p(120, 120, 0.2);
  for (int y = 40; y < 80; ++y)
    for (int x = 40; x < 80; ++x) p(x, y) = 0.9;
  const double before = channel_stats(p).mean;
  const double after = channel_stats(gaussian_surround(p, 4.0)).mean;
  CHECK(std::abs(before - after) < 1e-9);
}

TEST_CASE("msr_reflectance") {
  for (double v : testsupport::samples(msr_reflectance(Plane(30, 30, 0.45), EnhancerConfig{}))) CHECK(v == 0.0);

  EnhancerConfig ssr;
  ssr.msr_scales = {3.0};
  ssr.msr_weights = {1.0};
  const Plane p = random_plane(33, 27, 12);
  const Plane blur = oracle::gaussian_dense(p, 3.0);
  const Plane r = msr_reflectance(p, ssr);
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double expect = std::log(p.values()[k] + kDefaultLogEpsilon) - std::log(blur.values()[k] + kDefaultLogEpsilon);
    worst = std::max(worst, std::abs(expect - r.values()[k]));
  }
  CHECK(worst < 1e-10);

  const Plane nat = luminance(testsupport::smooth_scene(96, 80));
  CHECK(std::abs(channel_stats(msr_reflectance(nat, EnhancerConfig{})).mean) < 0.05);
}

TEST_CASE("guided_enhance") {
  const Plane flat = guided_enhance(to_log(Plane(24, 24, 0.3)), EnhancerConfig{});
  for (double v : flat.values()) CHECK(v == doctest::Approx(std::log(0.5 + kDefaultLogEpsilon)));

  const Plane p = luminance(testsupport::uneven_scene(80, 64));
  const Plane out = from_log(guided_enhance(to_log(p), EnhancerConfig{}));
  CHECK(in_unit(out));

  // half-dark / half-bright: CLAHE adds local contrast over the stretched MSR alone
  Plane halves = random_plane(64, 64, 21, 0.02, 0.08);
  for (int y = 0; y < 64; ++y)
    for (int x = 32; x < 64; ++x) halves(x, y) = 0.5 + 5.0 * (halves(x, y) - 0.02);
  const EnhancerConfig cfg;
  const Plane msr_only = normalize_percentile(msr_reflectance(halves, cfg), cfg.stretch.lo, cfg.stretch.hi);
  const Plane full = from_log(guided_enhance(to_log(halves), cfg));
  CHECK(channel_stats(full).stddev >= channel_stats(msr_only).stddev);
}

TEST_CASE("homomorphic_filter") {
  const Plane p = random_plane(30, 20, 31, 0.05, 0.95);
  CHECK(max_abs_diff(homomorphic_filter(p, 1.0, 1.0, 4.0), p) < 1e-9);

  const double c = 0.4;
  const Plane flat = homomorphic_filter(Plane(16, 16, c), 0.5, 1.0, 3.0);
  const double expect = std::exp(0.5 * std::log(c + kDefaultLogEpsilon)) - kDefaultLogEpsilon;
  for (double v : flat.values()) CHECK(v == doctest::Approx(expect).epsilon(1e-12));

  // step edge: far from the edge the surround equals the local value, so the
  // log contrast between the plateaus scales with gamma_low there, while the
  // detail right at the edge scales with gamma_high.
  Plane step(200, 8, 0.2);
  for (int y = 0; y < 8; ++y)
    for (int x = 100; x < 200; ++x) step(x, y) = 0.6;
  const double sigma = 3.0;
  const Plane out = homomorphic_filter(step, 0.7, 1.3, sigma);
  const Plane low = oracle::gaussian_dense(to_log(step), sigma);
  auto expect_at = [&](int x) {
    const double i = std::log(step(x, 4) + kDefaultLogEpsilon);
    return std::exp(0.7 * low(x, 4) + 1.3 * (i - low(x, 4))) - kDefaultLogEpsilon;
  };
  for (int x : {10, 97, 99, 100, 102, 190}) CHECK(std::abs(out(x, 4) - expect_at(x)) < 1e-6);
  const double far = std::log(out(190, 4) + kDefaultLogEpsilon) - std::log(out(10, 4) + kDefaultLogEpsilon);
  const double orig = std::log(0.6 + kDefaultLogEpsilon) - std::log(0.2 + kDefaultLogEpsilon);
  CHECK(far == doctest::Approx(0.7 * orig).epsilon(1e-9));
  CHECK_THROWS_AS(homomorphic_filter(p, 1.2, 1.0, 3.0), InvalidArgument);
}

TEST_CASE("gain_offset") {
  Plane p = random_plane(12, 12, 41, 0.2, 0.8);
  p(0, 0) = 0.2;
  p(1, 0) = 0.8;
  const Plane mm = gain_offset(p, gain::MinMax{});
  CHECK(mm(0, 0) == 0.0);
  CHECK(mm(1, 0) == 1.0);
  CHECK(in_unit(mm));

  for (const GainOffsetMode& m : {GainOffsetMode{gain::MinMax{}}, GainOffsetMode{gain::MeanStd{2.0}},
                                  GainOffsetMode{gain::Percentile{0.05, 0.95}}}) {
    for (double v : testsupport::samples(gain_offset(Plane(5, 5, 0.3), m))) CHECK(v == 0.5);
  }

  // unit-variance plane: values +-1 around 0.5, k=2 maps [mu-2, mu+2] to [0,1]
  Plane pm(10, 10);
  for (std::size_t k = 0; k < pm.size(); ++k) pm.values()[k] = 0.5 + (k % 2 ? 1.0 : -1.0);
  const Plane ms = gain_offset(pm, gain::MeanStd{2.0});
  for (std::size_t k = 0; k < pm.size(); ++k) {
    const double expect = (pm.values()[k] - (0.5 - 2.0)) / 4.0;
    CHECK(std::abs(ms.values()[k] - expect) < 1e-12);
  }
}

TEST_CASE("enhancers are deterministic") {
  const Plane p = random_plane(48, 40, 77);
  const EnhancerConfig cfg;
  CHECK(guided_enhance(to_log(p), cfg) == guided_enhance(to_log(p), cfg));
  CHECK(clahe(p, TileGrid{}, 0.01) == clahe(p, TileGrid{}, 0.01));
}
