#include <doctest.h>

#include <cmath>

#include "het/errors.hpp"
#include "het/synth.hpp"
#include "het/tracker.hpp"

using namespace het;

namespace {

// Small, fast scenario for unit-level end-to-end checks.
ScenarioSpec unit_scenario() {
  ScenarioSpec spec;
  spec.width = 160;
  spec.height = 120;
  spec.frame_count = 60;
  spec.target_w = 32;
  spec.target_h = 24;
  spec.start_x = 16.0;
  spec.start_y = 20.0;
  spec.vel_x = 0.0;
  spec.vel_y = 0.0;
  spec.noise_sigma = 4.0;  // mild sensor noise; a zero-variance background is degenerate
  spec.background = BackgroundKind::kClutter;
  spec.background_gray = 128;
  spec.clutter_amplitude = 110;
  spec.texture_smoothing = 2;
  spec.seed = 9;
  spec.texture_seed = 21;
  return spec;
}

TrackerConfig unit_config() {
  TrackerConfig config;
  config.m = 50;
  config.beta = 10.0;
  config.pi = 20.0;
  config.n_update = 30;
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("init draws patches of patch_scale times the box size") {
  const ScenarioSpec spec = unit_scenario();
  const Frame first = render_frame(spec, 0);
  TrackerConfig config = unit_config();
  const Tracker tracker(first, Box{16, 20, 32, 24}, config);
  CHECK(tracker.patches().patch_w == 24);  // round(0.75 * 32)
  CHECK(tracker.patches().patch_h == 18);  // round(0.75 * 24)
  CHECK(tracker.patches().count() == config.q_patches);
  for (const auto& patch : tracker.patches().patches) {
    CHECK(patch.location.x >= 16);
    CHECK(patch.location.y >= 20);
    CHECK(patch.location.x + 24 <= 16 + 32);
    CHECK(patch.location.y + 18 <= 20 + 24);
  }
}

TEST_CASE("the paper-scale box gives 36x27 patches") {
  Frame frame(320, 240);
  Tracker tracker(frame, Box{100, 100, 48, 36}, TrackerConfig{});
  CHECK(tracker.patches().patch_w == 36);
  CHECK(tracker.patches().patch_h == 27);
}

TEST_CASE("init is deterministic in the seed") {
  const ScenarioSpec spec = unit_scenario();
  const Frame first = render_frame(spec, 0);
  const TrackerConfig config = unit_config();
  Tracker a(first, Box{16, 20, 32, 24}, config);
  Tracker b(first, Box{16, 20, 32, 24}, config);
  CHECK(a.projection() == b.projection());
  REQUIRE(a.patches().count() == b.patches().count());
  for (int i = 0; i < a.patches().count(); ++i) {
    CHECK(a.patches().patches[i].location == b.patches().patches[i].location);
    CHECK(a.patches().patches[i].rel_offset == b.patches().patches[i].rel_offset);
    for (int f = 0; f < config.m; ++f) {
      CHECK(a.patches().patches[i].classifier.weak[f].mu_pos() ==
            b.patches().patches[i].classifier.weak[f].mu_pos());
      CHECK(a.patches().patches[i].classifier.weak[f].sigma_pos() ==
            b.patches().patches[i].classifier.weak[f].sigma_pos());
    }
  }
}

TEST_CASE("init rejects degenerate boxes") {
  Frame frame(64, 64);
  CHECK_THROWS_AS(Tracker(frame, Box{60, 60, 32, 24}, unit_config()), DimensionError);
  CHECK_THROWS_AS(Tracker(frame, Box{0, 0, 0, 5}, unit_config()), DimensionError);
  // box too small to host 2x2 sub-patches at patch_scale 0.75
  CHECK_THROWS_AS(Tracker(frame, Box{0, 0, 1, 5}, unit_config()), DimensionError);
}

TEST_CASE("after init each patch scores itself above a distance-pi position") {
  const ScenarioSpec spec = unit_scenario();
  const Frame first = render_frame(spec, 0);
  const TrackerConfig config = unit_config();
  Tracker tracker(first, Box{16, 20, 32, 24}, config);
  const IntegralImage ii(first);
  const CompiledProjection compiled(tracker.projection(), first.width() + 1);
  for (const auto& patch : tracker.patches().patches) {
    std::vector<double> own(config.m), far(config.m);
    const std::size_t base =
        static_cast<std::size_t>(patch.location.y) * ii.padded_stride() + patch.location.x;
    compiled.compress_into(ii.padded_data(), base, own);
    const int far_x = patch.location.x + static_cast<int>(config.pi);
    REQUIRE(far_x + tracker.patches().patch_w <= first.width());
    const std::size_t far_base =
        static_cast<std::size_t>(patch.location.y) * ii.padded_stride() + far_x;
    compiled.compress_into(ii.padded_data(), far_base, far);
    CHECK(strong_score(patch.classifier, own) > strong_score(patch.classifier, far));
  }
}

TEST_CASE("step rejects frames of a different size") {
  const ScenarioSpec spec = unit_scenario();
  const Frame first = render_frame(spec, 0);
  Tracker tracker(first, Box{16, 20, 32, 24}, unit_config());
  Frame wrong(100, 80);
  CHECK_THROWS_AS(tracker.step(wrong), DimensionError);
}

TEST_CASE("stationary target: box size fixed, drift under a pixel, tight update selection") {
  const ScenarioSpec spec = unit_scenario();
  const TrackerConfig config = unit_config();
  Tracker tracker(render_frame(spec, 0), Box{16, 20, 32, 24}, config);
  const Vec2 true_center{16.0 + 16.0, 20.0 + 12.0};
  for (int k = 1; k < 50; ++k) {
    const TrackOutput out = tracker.step(render_frame(spec, k));
    CHECK(out.box.w == 32);
    CHECK(out.box.h == 24);
    const Vec2 center = box_center(out.box);
    CHECK(norm(center - true_center) < 1.0);

    // Every patch selected for update scored strictly within one stddev
    // of the mean update score.
    std::vector<double> scores;
    for (const auto& p : out.patches) scores.push_back(p.update_score);
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    const double stddev = std::sqrt(var);
    for (const auto& p : out.patches) {
      if (p.updated) {
        CHECK(p.update_score > mean - stddev);
        CHECK(p.update_score < mean + stddev);
      }
    }
  }
}

TEST_CASE("constant-velocity target: small error after burn-in") {
  ScenarioSpec spec = unit_scenario();
  spec.vel_x = 1.5;
  spec.vel_y = 0.5;
  spec.frame_count = 50;
  const TrackerConfig config = unit_config();
  Tracker tracker(render_frame(spec, 0), scenario_box(spec, 0), config);
  double error_sum = 0.0;
  int counted = 0;
  for (int k = 1; k < spec.frame_count; ++k) {
    const TrackOutput out = tracker.step(render_frame(spec, k));
    if (k <= 10) continue;
    const Vec2 center = box_center(out.box);
    const Vec2 truth = box_center(scenario_box(spec, k));
    error_sum += norm(center - truth);
    ++counted;
  }
  CHECK(error_sum / counted < 2.0);
}

TEST_CASE("step trajectories are bit-identical for identical seeds") {
  ScenarioSpec spec = unit_scenario();
  spec.vel_x = 1.0;
  spec.noise_sigma = 4.0;
  const TrackerConfig config = unit_config();
  Tracker a(render_frame(spec, 0), scenario_box(spec, 0), config);
  Tracker b(render_frame(spec, 0), scenario_box(spec, 0), config);
  for (int k = 1; k < 30; ++k) {
    const Frame frame = render_frame(spec, k);
    const TrackOutput oa = a.step(frame);
    const TrackOutput ob = b.step(frame);
    CHECK(oa.box == ob.box);
    CHECK(oa.measurement.center.x == ob.measurement.center.x);
    CHECK(oa.measurement.center.y == ob.measurement.center.y);
    CHECK(oa.measurement.confidence == ob.measurement.confidence);
  }
}

TEST_CASE("select_for_update keeps only strictly-mid scores") {
  CHECK(select_for_update(std::vector<double>{3.0, 3.0, 3.0}).empty());

  // Distinct symmetric scores: the extremes always fall outside.
  const std::vector<double> scores{-4.0, -1.0, 0.0, 1.0, 4.0};
  const auto selected = select_for_update(scores);
  for (int i : selected) {
    CHECK(i != 0);
    CHECK(i != 4);
  }
  CHECK(!selected.empty());
}

TEST_CASE("tracker snapshot round trip resumes identically") {
  ScenarioSpec spec = unit_scenario();
  spec.vel_x = 1.0;
  const TrackerConfig config = unit_config();
  Tracker original(render_frame(spec, 0), scenario_box(spec, 0), config);
  for (int k = 1; k <= 10; ++k) original.step(render_frame(spec, k));

  Tracker resumed(original.state());
  for (int k = 11; k <= 20; ++k) {
    const Frame frame = render_frame(spec, k);
    const TrackOutput oa = original.step(frame);
    const TrackOutput ob = resumed.step(frame);
    CHECK(oa.box == ob.box);
    CHECK(oa.measurement.confidence == ob.measurement.confidence);
  }
}
