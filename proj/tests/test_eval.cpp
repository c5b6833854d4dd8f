#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "het/errors.hpp"
#include "het/eval.hpp"
#include "het/image_io.hpp"
#include "het/synth.hpp"

using namespace het;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("overlap: identical, disjoint, and half-shifted boxes") {
  const Box a{0, 0, 10, 10};
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(a, Box{20, 20, 10, 10}) == 0.0);
  CHECK(overlap(a, Box{5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0).epsilon(1e-12));
  CHECK_THROWS_AS(overlap(a, Box{0, 0, 0, 10}), ContractError);
}

TEST_CASE("overlap is symmetric and bounded") {
  Box a{3, 4, 7, 9}, b{6, 1, 12, 5};
  CHECK(overlap(a, b) == overlap(b, a));
  CHECK(overlap(a, b) >= 0.0);
  CHECK(overlap(a, b) <= 1.0);
}

TEST_CASE("center_error: identity, 3-4-5 triangle, symmetry") {
  const Box a{0, 0, 10, 10};
  CHECK(center_error(a, a) == 0.0);
  const Box b{3, 4, 10, 10};  // centers differ by (3, 4)
  CHECK(center_error(a, b) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(center_error(a, b) == center_error(b, a));
}

TEST_CASE("a perfect track scores AUC 1.0 and precision@20 1.0") {
  std::vector<Box> gt;
  for (int k = 0; k < 25; ++k) gt.push_back(Box{10 + 2 * k, 5 + k, 40, 30});
  const MetricReport report = compute_metrics(gt, gt);
  CHECK(report.success_auc == 1.0);
  CHECK(report.precision_at_20 == 1.0);
  for (double v : report.success_curve) CHECK(v == 1.0);
}

TEST_CASE("curves are monotone and anchored") {
  // A frozen box against a moving target gives a spread of errors/overlaps.
  std::vector<Box> gt, frozen;
  for (int k = 0; k < 40; ++k) {
    gt.push_back(Box{10 + 2 * k, 5 + k, 40, 30});
    frozen.push_back(Box{10, 5, 40, 30});
  }
  const MetricReport report = compute_metrics(frozen, gt);
  for (std::size_t i = 1; i < report.precision_curve.size(); ++i) {
    CHECK(report.precision_curve[i] >= report.precision_curve[i - 1]);
  }
  for (std::size_t i = 1; i < report.success_curve.size(); ++i) {
    CHECK(report.success_curve[i] <= report.success_curve[i - 1]);
  }
  CHECK(report.success_curve[0] == 1.0);  // overlap >= 0 always holds

  double mean = 0.0;
  for (double v : report.success_curve) mean += v;
  mean /= static_cast<double>(report.success_curve.size());
  CHECK(report.success_auc == doctest::Approx(mean).epsilon(1e-15));
}

TEST_CASE("a dominated tracker never beats a better one on the success curve") {
  std::vector<Box> gt, good, bad;
  for (int k = 0; k < 30; ++k) {
    gt.push_back(Box{50 + 3 * k, 40, 30, 30});
    // exact on the init frame, then always 2 px off: per-frame error is
    // never worse than the frozen tracker's
    good.push_back(Box{50 + 3 * k + (k == 0 ? 0 : 2), 40, 30, 30});
    bad.push_back(Box{50, 40, 30, 30});  // frozen
  }
  const MetricReport rg = compute_metrics(good, gt);
  const MetricReport rb = compute_metrics(bad, gt);
  for (std::size_t i = 0; i < rg.success_curve.size(); ++i) {
    CHECK(rg.success_curve[i] >= rb.success_curve[i]);
  }
}

TEST_CASE("synthetic generator: stationary scenario writes identical frames") {
  TempDir dir("het_test_static_seq");
  ScenarioSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.frame_count = 10;
  spec.target_w = 16;
  spec.target_h = 12;
  spec.start_x = 10;
  spec.start_y = 10;
  spec.vel_x = 0.0;
  spec.vel_y = 0.0;
  const Sequence seq = generate_synthetic(spec, dir.path);
  REQUIRE(seq.frames.size() == 10);
  const Frame first = read_pgm(seq.frames[0]);
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    const Frame f = read_pgm(seq.frames[i]);
    CHECK(std::equal(first.data().begin(), first.data().end(), f.data().begin()));
  }
  for (const Box& b : seq.ground_truth) CHECK(b == Box{10, 10, 16, 12});
}

TEST_CASE("synthetic generator: constant-velocity ground truth follows kinematics") {
  TempDir dir("het_test_cv_seq");
  ScenarioSpec spec;
  spec.width = 200;
  spec.height = 100;
  spec.frame_count = 20;
  spec.target_w = 16;
  spec.target_h = 12;
  spec.start_x = 20;
  spec.start_y = 20;
  spec.vel_x = 2.0;
  spec.vel_y = 1.0;
  const Sequence seq = generate_synthetic(spec, dir.path);
  for (int k = 0; k < 20; ++k) {
    CHECK(seq.ground_truth[k] == Box{20 + 2 * k, 20 + k, 16, 12});
  }
}

TEST_CASE("occluder hides the whole target, exactly on its frames, only in its region") {
  ScenarioSpec spec;
  spec.width = 100;
  spec.height = 80;
  spec.frame_count = 12;
  spec.target_w = 20;
  spec.target_h = 16;
  spec.start_x = 30;
  spec.start_y = 30;
  spec.vel_x = 2.0;
  spec.vel_y = 0.0;
  ScenarioSpec occluded = spec;
  occluded.occlude_from = 5;
  occluded.occlude_to = 8;
  const Box region = occluder_region(occluded);
  for (int k = 0; k < 12; ++k) {
    const Frame plain = render_frame(spec, k);
    const Frame occ = render_frame(occluded, k);
    const Box box = scenario_box(spec, k);
    bool differs_in_region = false;
    bool differs_elsewhere = false;
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        if (plain.at(x, y) == occ.at(x, y)) continue;
        const bool inside =
            x >= region.x && x < region.x + region.w && y >= region.y && y < region.y + region.h;
        (inside ? differs_in_region : differs_elsewhere) = true;
      }
    }
    CHECK(!differs_elsewhere);
    CHECK(differs_in_region == (k >= 5 && k <= 8));
    if (k >= 5 && k <= 8) {
      // full occlusion: every target pixel lies inside the occluder block
      CHECK(box.x >= region.x);
      CHECK(box.y >= region.y);
      CHECK(box.x + box.w <= region.x + region.w);
      CHECK(box.y + box.h <= region.y + region.h);
    }
  }
}

TEST_CASE("synthetic generator rejects trajectories leaving the frame") {
  ScenarioSpec spec;
  spec.width = 64;
  spec.height = 64;
  spec.frame_count = 100;
  spec.target_w = 16;
  spec.target_h = 12;
  spec.start_x = 10;
  spec.start_y = 10;
  spec.vel_x = 5.0;
  TempDir dir("het_test_escape_seq");
  CHECK_THROWS_AS(generate_synthetic(spec, dir.path), ConfigError);
}

TEST_CASE("generated sequences are bit-identical across runs") {
  TempDir a("het_test_det_a"), b("het_test_det_b");
  ScenarioSpec spec;
  spec.width = 80;
  spec.height = 60;
  spec.frame_count = 6;
  spec.target_w = 16;
  spec.target_h = 12;
  spec.noise_sigma = 6.0;
  spec.background = BackgroundKind::kClutter;
  generate_synthetic(spec, a.path);
  generate_synthetic(spec, b.path);
  for (int k = 1; k <= 6; ++k) {
    char name[16];
    std::snprintf(name, sizeof(name), "%04d.pgm", k);
    std::ifstream fa(a.path / "img" / name, std::ios::binary);
    std::ifstream fb(b.path / "img" / name, std::ios::binary);
    const std::string da((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string db((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(da == db);
    CHECK(!da.empty());
  }
}

TEST_CASE("load_sequence parses 1-based ground truth and both separators") {
  TempDir dir("het_test_load_seq");
  fs::create_directories(dir.path / "img");
  Frame f(32, 32);
  write_pgm(f, dir.path / "img" / "0001.pgm");
  write_pgm(f, dir.path / "img" / "0002.pgm");
  {
    std::ofstream gt(dir.path / "groundtruth_rect.txt");
    gt << "11,21,8,6\n";
    gt << "12 22 8 6\n";
  }
  const Sequence seq = load_sequence(dir.path);
  REQUIRE(seq.ground_truth.size() == 2);
  CHECK(seq.ground_truth[0] == Box{10, 20, 8, 6});
  CHECK(seq.ground_truth[1] == Box{11, 21, 8, 6});
}

TEST_CASE("load_sequence rejects mismatched ground truth") {
  TempDir dir("het_test_bad_seq");
  fs::create_directories(dir.path / "img");
  write_pgm(Frame(16, 16), dir.path / "img" / "0001.pgm");
  {
    std::ofstream gt(dir.path / "groundtruth_rect.txt");
    gt << "1,1,4,4\n1,1,4,4\n";
  }
  CHECK_THROWS_AS(load_sequence(dir.path), ParseError);
  fs::remove(dir.path / "groundtruth_rect.txt");
  CHECK_THROWS_AS(load_sequence(dir.path), IoError);
}

TEST_CASE("run_ope on an easy synthetic sequence meets sane floors") {
  TempDir dir("het_test_ope_seq");
  ScenarioSpec spec;
  spec.width = 160;
  spec.height = 120;
  spec.frame_count = 30;
  spec.target_w = 32;
  spec.target_h = 24;
  spec.start_x = 16;
  spec.start_y = 20;
  spec.vel_x = 1.0;
  spec.vel_y = 0.5;
  spec.noise_sigma = 2.0;
  const Sequence seq = generate_synthetic(spec, dir.path);

  TrackerConfig config;
  config.m = 50;
  config.beta = 10.0;
  config.pi = 20.0;
  config.n_update = 30;
  config.seed = 7;
  const OpeResult result = run_ope(config, seq);
  REQUIRE(result.boxes.size() == seq.frames.size());
  CHECK(result.report.success_auc > 0.5);
  CHECK(result.report.precision_at_20 == 1.0);
  for (std::size_t i = 1; i < result.report.precision_curve.size(); ++i) {
    CHECK(result.report.precision_curve[i] >= result.report.precision_curve[i - 1]);
  }
}
