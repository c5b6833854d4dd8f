#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "het/ensemble.hpp"
#include "het/image.hpp"
#include "het/kalman.hpp"
#include "het/rng.hpp"

namespace het {

struct TrackerConfig {
  int m = 150;            // weak classifiers per patch
  int q_patches = 11;     // sub-patches (>= 11 so W >= 1)
  int z_max = 4;          // max rectangles per projection row
  double learning_rate = 0.85;
  double beta = 20.0;     // local search / positive-sample radius, px
  double pi = 40.0;       // negative-sample inner radius, px (2 * beta)
  int stride = 1;         // search grid stride
  int n_update = 50;      // positive and negative samples per update
  double patch_scale = 0.75;  // patch size as a fraction of the target box
  bool predictive_search = false;  // offset search centers by Kalman velocity
  std::uint64_t seed = 1;
  KalmanConfig kalman;

  void validate() const;  // throws ConfigError
};

// Per-patch view of one step, for the diagnostics stream and tests.
struct PatchDiag {
  Point location;
  double score = 0.0;
  double weight = 0.0;
  bool matched = false;
  bool updated = false;        // selected by the mid-score rule this frame
  double update_score = 0.0;   // score at the relocated position
};

struct TrackOutput {
  int frame_index = 0;
  Box box;                     // posterior-centered, clamped to the frame
  Measurement measurement;
  Vec2 kalman_position;        // unclamped posterior
  Vec2 kalman_velocity;
  std::vector<PatchDiag> patches;
};

// Full persistent state of one track, for exact save/restore.
struct TrackerState {
  TrackerConfig config;
  int frame_w = 0, frame_h = 0;
  int target_w = 0, target_h = 0;
  int frame_index = 0;
  Box last_box;
  SparseProjection projection;
  PatchSet patches;
  Eigen::Vector4d kalman_x;
  Eigen::Matrix4d kalman_p;
  Eigen::Matrix4d kalman_q_cur;
  Eigen::Matrix2d kalman_r_cur;
  double score_mean = 0.0;
  double score_sigma = 0.0;
  bool score_stats_ready = false;
  std::string rng_state;
};

// One target, one tracker. Construction is the first-frame initialization:
// Q patches drawn inside the box, one shared projection, classifiers
// bootstrapped by direct assignment, Kalman at the box center. step() runs
// detect -> combine -> filter -> update and returns the frame's output.
//
// The box size is fixed for the whole track. Identical (seed, config,
// frames, box) produce bit-identical trajectories.
class Tracker {
 public:
  Tracker(const Frame& first_frame, Box init_box, const TrackerConfig& config);
  explicit Tracker(const TrackerState& state);

  TrackOutput step(const Frame& frame);

  const TrackerConfig& config() const { return cfg_; }
  const SparseProjection& projection() const { return proj_; }
  const PatchSet& patches() const { return patches_; }
  const KalmanFilter& kalman() const { return kalman_; }
  Box current_box() const { return last_box_; }
  int frame_index() const { return frame_index_; }
  int frame_width() const { return frame_w_; }
  int frame_height() const { return frame_h_; }

  TrackerState state() const;

 private:
  double positive_radius() const;
  void train_initial_classifiers(const IntegralImage& ii);
  void model_update(const IntegralImage& ii, Vec2 final_center, std::vector<PatchDiag>& diag);
  std::vector<Point> sample_around(Point base, double lo_exclusive, double hi, bool hi_inclusive,
                                   int count);
  double level_confidence(std::span<const double> matched_scores);

  TrackerConfig cfg_;
  int frame_w_ = 0, frame_h_ = 0;
  int target_w_ = 0, target_h_ = 0;
  SparseProjection proj_;
  CompiledProjection compiled_;
  PatchSet patches_;
  KalmanFilter kalman_;
  Rng rng_;
  int frame_index_ = 1;
  Box last_box_;
  // Running score statistics referencing the track's own history; the
  // Kalman noise adaptation needs absolute match quality, which the
  // per-frame vote normalization deliberately discards.
  double score_mean_ = 0.0;
  double score_sigma_ = 0.0;
  bool score_stats_ready_ = false;
};

// Mid-score update rule: indices whose score lies strictly inside
// (mean - stddev, mean + stddev) of the given scores (population stddev).
// All-equal scores select nothing.
std::vector<int> select_for_update(std::span<const double> scores);

}  // namespace het
