#include "het/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "het/config.hpp"
#include "het/errors.hpp"
#include "het/image_io.hpp"
#include "het/rng.hpp"

namespace het {

namespace {

std::vector<std::uint8_t> random_texture(std::uint64_t seed, int w, int h, int smoothing) {
  Rng rng(seed);
  std::vector<std::uint8_t> tex(static_cast<std::size_t>(w) * h);
  for (auto& px : tex) px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  if (smoothing < 1) return tex;
  // Box blur; pixel-scale noise has no spatial coherence for the rectangle
  // features to lock onto, real surfaces do.
  std::vector<std::uint8_t> out(tex.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sum = 0, count = 0;
      for (int dy = -smoothing; dy <= smoothing; ++dy) {
        for (int dx = -smoothing; dx <= smoothing; ++dx) {
          const int sx = x + dx, sy = y + dy;
          if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
          sum += tex[static_cast<std::size_t>(sy) * w + sx];
          ++count;
        }
      }
      out[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint8_t>((sum + count / 2) / count);
    }
  }
  return out;
}

bool occluded(const ScenarioSpec& spec, int k) {
  return spec.occlude_from && spec.occlude_to && k >= *spec.occlude_from &&
         k <= *spec.occlude_to;
}

std::string frame_name(int index_1based) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d.pgm", index_1based);
  return buf;
}

}  // namespace

Box scenario_box(const ScenarioSpec& spec, int k) {
  double x = spec.start_x;
  double y = spec.start_y;
  switch (spec.trajectory) {
    case Trajectory::kConstantVelocity:
      x += spec.vel_x * k;
      y += spec.vel_y * k;
      break;
    case Trajectory::kSinusoidal:
      x += spec.vel_x * k;
      y += spec.sin_amplitude *
           std::sin(2.0 * std::numbers::pi * k / spec.sin_period);
      break;
  }
  return Box{static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y)), spec.target_w,
             spec.target_h};
}

Box occluder_region(const ScenarioSpec& spec) {
  if (!spec.occlude_from || !spec.occlude_to) return Box{0, 0, 0, 0};
  int x0 = spec.width, y0 = spec.height, x1 = 0, y1 = 0;
  for (int k = *spec.occlude_from; k <= *spec.occlude_to; ++k) {
    const Box b = scenario_box(spec, k);
    x0 = std::min(x0, b.x);
    y0 = std::min(y0, b.y);
    x1 = std::max(x1, b.x + b.w);
    y1 = std::max(y1, b.y + b.h);
  }
  const int margin = 2;
  x0 = std::max(0, x0 - margin);
  y0 = std::max(0, y0 - margin);
  x1 = std::min(spec.width, x1 + margin);
  y1 = std::min(spec.height, y1 + margin);
  return Box{x0, y0, x1 - x0, y1 - y0};
}

Frame render_frame(const ScenarioSpec& spec, int k) {
  const Box box = scenario_box(spec, k);
  if (box.x < 0 || box.y < 0 || box.x + box.w > spec.width || box.y + box.h > spec.height) {
    throw ConfigError("target trajectory leaves the frame at frame " + std::to_string(k));
  }

  Frame frame(spec.width, spec.height);
  if (spec.background == BackgroundKind::kUniform) {
    std::fill(frame.data().begin(), frame.data().end(),
              static_cast<std::uint8_t>(std::clamp(spec.background_gray, 0, 255)));
  } else {
    Rng rng(mix_seed(spec.seed ^ 0xba5eULL));
    for (auto& px : frame.data()) {
      const int v = spec.background_gray +
                    rng.uniform_int(-spec.clutter_amplitude, spec.clutter_amplitude);
      px = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }

  const auto target =
      random_texture(spec.texture_seed, spec.target_w, spec.target_h, spec.texture_smoothing);
  for (int y = 0; y < box.h; ++y) {
    for (int x = 0; x < box.w; ++x) {
      frame.at(box.x + x, box.y + y) = target[static_cast<std::size_t>(y) * box.w + x];
    }
  }

  if (occluded(spec, k)) {
    const Box occ = occluder_region(spec);
    const auto texture = random_texture(mix_seed(spec.seed ^ 0x0cc1ULL), occ.w, occ.h,
                                        spec.texture_smoothing);
    for (int y = 0; y < occ.h; ++y) {
      for (int x = 0; x < occ.w; ++x) {
        frame.at(occ.x + x, occ.y + y) = texture[static_cast<std::size_t>(y) * occ.w + x];
      }
    }
  }

  if (spec.noise_sigma > 0.0) {
    Rng noise(mix_seed(spec.seed) ^ static_cast<std::uint64_t>(k + 1));
    for (auto& px : frame.data()) {
      const long v = std::lround(px + noise.gaussian(0.0, spec.noise_sigma));
      px = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
  }
  return frame;
}

Sequence generate_synthetic(const ScenarioSpec& spec, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  if (spec.frame_count < 1) throw ConfigError("frame_count must be >= 1");
  if (spec.target_w < 1 || spec.target_h < 1 || spec.width < 1 || spec.height < 1) {
    throw ConfigError("degenerate scenario dimensions");
  }
  // Validate the whole trajectory before touching the disk.
  for (int k = 0; k < spec.frame_count; ++k) {
    const Box box = scenario_box(spec, k);
    if (box.x < 0 || box.y < 0 || box.x + box.w > spec.width ||
        box.y + box.h > spec.height) {
      throw ConfigError("target trajectory leaves the frame at frame " + std::to_string(k));
    }
  }

  fs::create_directories(out_dir / "img");
  std::ofstream gt(out_dir / "groundtruth_rect.txt");
  if (!gt) throw IoError("cannot write ground truth under " + out_dir.string());
  for (int k = 0; k < spec.frame_count; ++k) {
    const Frame frame = render_frame(spec, k);
    write_pgm(frame, out_dir / "img" / frame_name(k + 1));
    const Box box = scenario_box(spec, k);
    gt << (box.x + 1) << "," << (box.y + 1) << "," << box.w << "," << box.h << "\n";
  }
  gt.close();

  std::ofstream echo(out_dir / "scenario.txt");
  echo << "width=" << spec.width << "\nheight=" << spec.height
       << "\nframes=" << spec.frame_count << "\ntarget_w=" << spec.target_w
       << "\ntarget_h=" << spec.target_h << "\nstart_x=" << spec.start_x
       << "\nstart_y=" << spec.start_y << "\ntrajectory="
       << (spec.trajectory == Trajectory::kConstantVelocity ? "constant_velocity" : "sinusoidal")
       << "\nvel_x=" << spec.vel_x << "\nvel_y=" << spec.vel_y
       << "\nsin_amplitude=" << spec.sin_amplitude << "\nsin_period=" << spec.sin_period
       << "\nnoise_sigma=" << spec.noise_sigma << "\nbackground="
       << (spec.background == BackgroundKind::kUniform ? "uniform" : "clutter")
       << "\nbackground_gray=" << spec.background_gray
       << "\nclutter_amplitude=" << spec.clutter_amplitude
       << "\ntexture_smoothing=" << spec.texture_smoothing << "\nseed=" << spec.seed
       << "\ntexture_seed=" << spec.texture_seed << "\n";
  if (spec.occlude_from) echo << "occlude_from=" << *spec.occlude_from << "\n";
  if (spec.occlude_to) echo << "occlude_to=" << *spec.occlude_to << "\n";
  echo.close();

  return load_sequence(out_dir);
}

ScenarioSpec parse_scenario(const std::filesystem::path& key_value_file) {
  const auto kv = parse_key_value_file(key_value_file);
  ScenarioSpec spec;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "width") spec.width = std::stoi(value);
      else if (key == "height") spec.height = std::stoi(value);
      else if (key == "frames") spec.frame_count = std::stoi(value);
      else if (key == "target_w") spec.target_w = std::stoi(value);
      else if (key == "target_h") spec.target_h = std::stoi(value);
      else if (key == "start_x") spec.start_x = std::stod(value);
      else if (key == "start_y") spec.start_y = std::stod(value);
      else if (key == "vel_x") spec.vel_x = std::stod(value);
      else if (key == "vel_y") spec.vel_y = std::stod(value);
      else if (key == "sin_amplitude") spec.sin_amplitude = std::stod(value);
      else if (key == "sin_period") spec.sin_period = std::stod(value);
      else if (key == "noise_sigma") spec.noise_sigma = std::stod(value);
      else if (key == "background_gray") spec.background_gray = std::stoi(value);
      else if (key == "clutter_amplitude") spec.clutter_amplitude = std::stoi(value);
      else if (key == "texture_smoothing") spec.texture_smoothing = std::stoi(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "texture_seed") spec.texture_seed = std::stoull(value);
      else if (key == "occlude_from") spec.occlude_from = std::stoi(value);
      else if (key == "occlude_to") spec.occlude_to = std::stoi(value);
      else if (key == "trajectory") {
        if (value == "constant_velocity") spec.trajectory = Trajectory::kConstantVelocity;
        else if (value == "sinusoidal") spec.trajectory = Trajectory::kSinusoidal;
        else throw ParseError("unknown trajectory: '" + value + "'");
      } else if (key == "background") {
        if (value == "uniform") spec.background = BackgroundKind::kUniform;
        else if (value == "clutter") spec.background = BackgroundKind::kClutter;
        else throw ParseError("unknown background: '" + value + "'");
      } else {
        throw ParseError("unknown scenario key: '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("bad value for " + key + ": '" + value + "'");
    }
  }
  return spec;
}

}  // namespace het
