#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "het/eval.hpp"
#include "het/image.hpp"

namespace het {

enum class Trajectory { kConstantVelocity, kSinusoidal };
enum class BackgroundKind { kUniform, kClutter };

// Deterministic synthetic scenario: a textured rectangle moving over a
// known background, with optional per-pixel noise and a full occluder over
// a frame interval. Same spec -> bit-identical sequence on disk.
struct ScenarioSpec {
  int width = 320;
  int height = 240;
  int frame_count = 100;
  int target_w = 48;
  int target_h = 36;
  double start_x = 20.0;  // target upper-left at frame 0
  double start_y = 20.0;
  Trajectory trajectory = Trajectory::kConstantVelocity;
  double vel_x = 2.0;  // px/frame
  double vel_y = 1.0;
  double sin_amplitude = 0.0;  // sinusoidal: y = start_y + A*sin(2*pi*k/period)
  double sin_period = 40.0;
  double noise_sigma = 0.0;
  BackgroundKind background = BackgroundKind::kUniform;
  int background_gray = 100;       // uniform level, or clutter mean
  int clutter_amplitude = 50;      // clutter pixels ~ U(gray - amp, gray + amp)
  int texture_smoothing = 2;       // box-blur radius applied to the target texture
  std::uint64_t seed = 1;          // noise + background/occluder textures
  std::uint64_t texture_seed = 7;  // target texture
  std::optional<int> occlude_from;  // inclusive 0-based frame indices
  std::optional<int> occlude_to;
};

// The occluder is static in image space: a textured block covering the
// target's whole path over the occluded interval (plus a small margin),
// so the target is fully hidden and there is no moving texture to track.
Box occluder_region(const ScenarioSpec& spec);

ScenarioSpec parse_scenario(const std::filesystem::path& key_value_file);

// Target upper-left at frame k (exact ground truth).
Box scenario_box(const ScenarioSpec& spec, int k);

// Renders frame k in memory (no disk I/O).
Frame render_frame(const ScenarioSpec& spec, int k);

// Writes out_dir/img/%04d.pgm plus groundtruth_rect.txt (1-based origin)
// and a scenario.txt echo of the effective parameters. Returns the loaded
// Sequence. Throws if the trajectory ever leaves the frame.
Sequence generate_synthetic(const ScenarioSpec& spec, const std::filesystem::path& out_dir);

}  // namespace het
