#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "retinexad/colour.hpp"
#include "retinexad/engine.hpp"
#include "retinexad/error.hpp"
#include "retinexad/metrics.hpp"
#include "stopping_cases.hpp"
#include "synthetic.hpp"

using namespace retinexad;
using testsupport::random_plane;

namespace {

PdeParams weights(double a, double b, double l) {
  PdeParams p;
  p.alpha = a;
  p.beta = b;
  p.lambda = l;
  return p;
}

double mean_spread(const ColourImage& rgb) {
  double lo = 1e9, hi = -1e9;
  for (std::size_t c = 0; c < 3; ++c) {
    const double m = channel_stats(rgb[c]).mean;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

int argmax_entropy(const EvolutionTrace& t) {
  int best = 0;
  for (std::size_t k = 0; k < t.records.size(); ++k)
    if (best == 0 || t.records[k].entropy > t.records[static_cast<std::size_t>(best - 1)].entropy)
      best = static_cast<int>(k) + 1;
  return best;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(PdeParams{}.validate());
  PdeParams p;
  p.dt = 1.0;
  p.alpha = 0.5;
  p.lambda = 0.2;
  CHECK_THROWS_WITH_AS(p.validate(), "unstable step", InvalidArgument);
  p = PdeParams{};
  p.alpha = -0.1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = PdeParams{};
  p.max_iter = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = PdeParams{};
  p.stop.window = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("evolve_step term algebra") {
  const Plane i = to_log(random_plane(40, 30, 1, 0.05, 0.95));
  const Plane f = to_log(random_plane(40, 30, 2, 0.05, 0.95));
  CHECK(evolve_step(i, weights(0, 0, 0), f) == i);
  CHECK(evolve_step(i, weights(0.7, 0, 0), i) == i);

  // beta only: deviations scale by (1 + dt beta / sigma), so sigma grows by dt beta
  PdeParams b = weights(0, 0.3, 0);
  b.dt = 0.2;
  Plane cur = i;
  for (int n = 0; n < 20; ++n) {
    const ChannelStats before = channel_stats(cur);
    cur = evolve_step(cur, b, f);
    const ChannelStats after = channel_stats(cur);
    CHECK(std::abs(after.stddev - before.stddev - b.dt * b.beta) < 1e-9);
    CHECK(std::abs(after.mean - before.mean) < 1e-12);
  }

  // flat channel: the beta term is skipped and flagged
  StepInfo info;
  const Plane flat(10, 10, -1.0);
  CHECK(evolve_step(flat, weights(0, 0.5, 0), flat, &info) == flat);
  CHECK(info.beta_skipped);
  CHECK_THROWS_AS(evolve_step(i, PdeParams{}, Plane(3, 3)), InvalidArgument);
}

TEST_CASE("stopping_decision examples") {
  using testsupport::make_trace;
  const auto peak = stopping_decision(make_trace({7.0, 7.3, 7.4, 7.35, 7.2}, {9, 9, 9, 9, 9}), StoppingCriteria{}, 200);
  CHECK(peak.stop);
  CHECK(peak.reason == StopReason::kEntropyPeak);
  CHECK(peak.best_n == 3);

  StoppingCriteria w3;
  w3.window = 3;
  const auto flat = stopping_decision(make_trace(std::vector<double>(8, 7.0), std::vector<double>(8, 9.0)), w3, 200);
  CHECK(flat.reason == StopReason::kFlatness);
  CHECK(flat.stop_n == 4);

  const auto rising = stopping_decision(make_trace({1, 2, 3, 4}, {9, 9, 9, 9}), StoppingCriteria{}, 200);
  CHECK_FALSE(rising.stop);
  CHECK(rising.best_n == 4);
  const auto capped = stopping_decision(make_trace({1, 2, 3, 4}, {9, 9, 9, 9}), StoppingCriteria{}, 4);
  CHECK(capped.reason == StopReason::kMaxIter);
  CHECK(capped.best_n == 4);
}

TEST_CASE("stopping_decision on constructed series") {
  const auto cases = testsupport::stopping_cases();
  CHECK(cases.size() >= 50);
  for (const auto& c : cases) {
    INFO(c.name);
    const StopDecision d = stopping_decision(c.trace, c.crit, c.max_iter);
    CHECK(d.stop);
    CHECK(d.reason == c.reason);
    CHECK(d.stop_n == c.stop_n);
    CHECK(d.best_n == c.best_n);
  }
}

TEST_CASE("run_hsi keeps hue and saturation and returns the entropy maximum") {
  const ColourImage img = testsupport::quantize(testsupport::uneven_scene(64, 48));
  for (auto space : {ColourSpace::kHSI, ColourSpace::kHSV}) {
    PdeParams p;
    p.colour_mode = space;
    const RunResult r = run_hsi(img, p);
    REQUIRE(r.working.has_value());
    const ColourImage in = from_rgb(img, space);
    CHECK((*r.working)[0] == in[0]);
    CHECK((*r.working)[1] == in[1]);
    CHECK(r.trace.best_n == argmax_entropy(r.trace));
    CHECK(r.trace.stop_reason != StopReason::kNone);
    CHECK(static_cast<int>(r.trace.records.size()) <= p.max_iter);
    for (std::size_t k = 0; k < r.trace.records.size(); ++k) CHECK(r.trace.records[k].n == static_cast<int>(k) + 1);
  }
  PdeParams rgb_mode;
  rgb_mode.colour_mode = ColourSpace::kRGB;
  CHECK_THROWS_AS(run_hsi(img, rgb_mode), InvalidArgument);
}

TEST_CASE("run_hsi on a constant grey image") {
  const ColourImage g = testsupport::grey(Plane(32, 32, 0.3));
  const RunResult r = run_hsi(g, PdeParams{});
  CHECK(r.trace.best_n <= 2);
  for (std::size_t c = 0; c < 3; ++c)
    for (double v : r.image[c].values()) CHECK(std::abs(v - 0.3) <= 0.51);
}

TEST_CASE("runs are deterministic") {
  const ColourImage img = testsupport::uneven_scene(48, 40);
  const RunResult a = run(img, PdeParams{});
  const RunResult b = run(img, PdeParams{});
  CHECK(a.image == b.image);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
    CHECK(a.trace.records[k].entropy == b.trace.records[k].entropy);
    CHECK(a.trace.records[k].pqm == b.trace.records[k].pqm);
  }
}

TEST_CASE("fixed_iter runs exactly that many steps") {
  const ColourImage img = testsupport::smooth_scene(40, 32);
  PdeParams p;
  p.fixed_iter = 7;
  const RunResult h = run_hsi(img, p);
  CHECK(h.trace.records.size() == 7);
  CHECK(h.trace.stop_reason == StopReason::kFixedIter);
  p.colour_mode = ColourSpace::kRGB;
  const RunResult r = run_rgb(img, p);
  CHECK(r.trace.records.size() == 7);
  CHECK_FALSE(r.trace.best_effort);
  p.fixed_iter = 0;
  CHECK(run_rgb(img, p).image == img);
  CHECK(run_hsi(img, [&] { auto q = p; q.colour_mode = ColourSpace::kHSI; return q; }()).image == img);
}

TEST_CASE("run_rgb") {
  PdeParams p;
  p.colour_mode = ColourSpace::kRGB;
  p.fixed_iter = 6;
  const ColourImage g = testsupport::grey(random_plane(36, 30, 3));
  const RunResult r = run_rgb(g, p);
  for (std::size_t k = 0; k < g[0].size(); ++k) {
    CHECK(std::abs(r.image[0].values()[k] - r.image[1].values()[k]) < 1e-12);
    CHECK(std::abs(r.image[0].values()[k] - r.image[2].values()[k]) < 1e-12);
  }
  for (const auto& rec : r.trace.records) CHECK(rec.mean.size() == 3);

  const ColourImage cast = testsupport::blue_cast(testsupport::smooth_scene(64, 48));
  p.fixed_iter = 10;
  CHECK(mean_spread(run_rgb(cast, p).image) < mean_spread(cast));

  p.fixed_iter.reset();
  p.max_iter = 30;
  CHECK(run_rgb(cast, p).trace.best_effort);
}

TEST_CASE("run_base_model") {
  const ColourImage img = testsupport::quantize(testsupport::smooth_scene(40, 30));
  PdeParams p;
  p.colour_mode = ColourSpace::kRGB;
  p.lambda = 0.0;
  p.fixed_iter = 5;
  CHECK(run_base_model(img, p, BaseEnhancer::kIdentity) == img);

  p.dt = 1.0;
  p.alpha = 0.0;
  p.fixed_iter = 1;
  const ColourImage he = run_base_model(img, p, BaseEnhancer::kGlobalHe);
  for (std::size_t c = 0; c < 3; ++c) {
    const Plane expect = global_he(img[c]);
    for (std::size_t k = 0; k < expect.size(); ++k) CHECK(std::abs(he[c].values()[k] - expect.values()[k]) < 1e-12);
  }

  // already equalized: one pixel per level (k+1)/256, which HE maps to itself
  Plane eq(256, 1);
  for (int x = 0; x < 256; ++x) eq(x, 0) = (x + 1) / 256.0;
  const Plane drive = global_he(eq);
  double norm = 0.0;
  for (std::size_t k = 0; k < eq.size(); ++k) norm += std::abs(drive.values()[k] - eq.values()[k]);
  CHECK(norm / static_cast<double>(eq.size()) < 1e-3);
}
