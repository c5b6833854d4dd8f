#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "het/config.hpp"
#include "het/errors.hpp"
#include "het/eval.hpp"
#include "het/image_io.hpp"
#include "het/serialize.hpp"
#include "het/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitTrackLost = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string config_file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int stride = 0;
  bool stride_given = false;
  bool predictive_search = false;
};

// Precedence: defaults < config file < command-line flags.
het::TrackerConfig resolve_config(const CommonOpts& opts) {
  het::TrackerConfig config;
  if (!opts.config_file.empty()) config = het::load_config(opts.config_file);
  if (opts.seed_given) config.seed = opts.seed;
  if (opts.stride_given) config.stride = opts.stride;
  if (opts.predictive_search) config.predictive_search = true;
  config.validate();
  return config;
}

nlohmann::json make_manifest(const het::TrackerConfig& config, const std::string& sequence,
                             const std::vector<std::string>& outputs, double total_seconds,
                             double mean_frame_ms, double fps_excl, double fps_incl) {
  return nlohmann::json{{"tool", "het"},
                        {"version", kVersion},
                        {"sequence", sequence},
                        {"seed", config.seed},
                        {"config", het::config_to_json(config)},
                        {"outputs", outputs},
                        {"timing",
                         {{"total_seconds", total_seconds},
                          {"mean_frame_ms", mean_frame_ms},
                          {"fps_decode_excluded", fps_excl},
                          {"fps_decode_included", fps_incl}}}};
}

void write_results_csv(const std::filesystem::path& path, std::span<const het::Box> boxes,
                       std::span<const double> confidences) {
  std::ofstream out(path);
  if (!out) throw het::IoError("cannot write " + path.string());
  char line[128];
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%d,%d,%d,%d,%.6f\n", i + 1, boxes[i].x, boxes[i].y,
                  boxes[i].w, boxes[i].h, confidences[i]);
    out << line;
  }
}

void write_curve_csv(const std::filesystem::path& path, std::span<const double> values,
                     double threshold_step) {
  std::ofstream out(path);
  if (!out) throw het::IoError("cannot write " + path.string());
  char line[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f\n", threshold_step * static_cast<double>(i),
                  values[i]);
    out << line;
  }
}

int cmd_track(const std::string& seq_dir, const std::string& init_str, const CommonOpts& opts,
              const std::string& out_dir_str, bool diag) {
  const het::TrackerConfig config = resolve_config(opts);

  // Parse everything fallible before creating any output file.
  std::optional<het::Box> init_box;
  if (!init_str.empty()) init_box = het::parse_box(init_str);

  het::Sequence seq;
  if (init_box) {
    // Ground truth is optional when the box comes from the flag.
    try {
      seq = het::load_sequence(seq_dir);
    } catch (const het::IoError&) {
      namespace fs = std::filesystem;
      const fs::path img_dir = fs::path(seq_dir) / "img";
      if (!fs::is_directory(img_dir)) throw;
      seq.name = fs::path(seq_dir).filename().string();
      for (const auto& entry : fs::directory_iterator(img_dir)) {
        if (entry.is_regular_file()) seq.frames.push_back(entry.path());
      }
      std::sort(seq.frames.begin(), seq.frames.end());
      if (seq.frames.empty()) throw;
    }
  } else {
    seq = het::load_sequence(seq_dir);
    init_box = seq.ground_truth.at(0);
  }

  const std::filesystem::path out_dir =
      out_dir_str.empty() ? std::filesystem::path("het_runs") / seq.name
                          : std::filesystem::path(out_dir_str);
  std::filesystem::create_directories(out_dir);

  std::vector<het::Box> boxes;
  std::vector<double> confidences;
  std::ofstream diag_stream;
  if (diag) {
    diag_stream.open(out_dir / "diagnostics.jsonl");
    if (!diag_stream) throw het::IoError("cannot write diagnostics under " + out_dir.string());
  }

  const auto wall_start = std::chrono::steady_clock::now();
  double decode_seconds = 0.0;
  double track_seconds = 0.0;
  bool lost = false;

  auto t0 = std::chrono::steady_clock::now();
  het::Frame first = het::load_frame(seq.frames.at(0));
  decode_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  t0 = std::chrono::steady_clock::now();
  het::Tracker tracker(first, *init_box, config);
  track_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  boxes.push_back(*init_box);
  confidences.push_back(0.0);

  for (std::size_t i = 1; i < seq.frames.size() && !lost; ++i) {
    t0 = std::chrono::steady_clock::now();
    het::Frame frame = het::load_frame(seq.frames[i]);
    decode_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    t0 = std::chrono::steady_clock::now();
    try {
      const het::TrackOutput out = tracker.step(frame);
      track_seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      boxes.push_back(out.box);
      confidences.push_back(out.measurement.confidence);
      if (diag) diag_stream << het::output_to_json(out).dump() << "\n";
    } catch (const het::TrackLostError& e) {
      track_seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << "track lost at frame " << (i + 1) << ": " << e.what() << "\n";
      lost = true;
    }
  }

  const double total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  const double frames = static_cast<double>(boxes.size());
  const double fps_excl = frames / track_seconds;
  const double fps_incl = frames / (track_seconds + decode_seconds);

  const auto results_path = out_dir / "results.csv";
  write_results_csv(results_path, boxes, confidences);
  std::vector<std::string> outputs{results_path.string()};
  if (diag) outputs.push_back((out_dir / "diagnostics.jsonl").string());

  const auto manifest = make_manifest(config, seq_dir, outputs, total_seconds,
                                      1000.0 * track_seconds / frames, fps_excl, fps_incl);
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";

  std::cout << "tracked " << boxes.size() << "/" << seq.frames.size() << " frames: " << fps_excl
            << " fps (decode excluded), " << fps_incl << " fps (decode included)\n";
  return lost ? kExitTrackLost : kExitOk;
}

int cmd_eval(const std::vector<std::string>& seq_dirs, const CommonOpts& opts,
             const std::string& out_dir_str) {
  const het::TrackerConfig config = resolve_config(opts);
  const std::filesystem::path out_dir =
      out_dir_str.empty() ? std::filesystem::path("het_eval") : std::filesystem::path(out_dir_str);
  std::filesystem::create_directories(out_dir / "results");
  std::filesystem::create_directories(out_dir / "metrics");
  std::filesystem::create_directories(out_dir / "curves");

  double auc_sum = 0.0, prec_sum = 0.0;
  int evaluated = 0, skipped = 0;
  nlohmann::json per_sequence = nlohmann::json::array();

  for (const auto& dir : seq_dirs) {
    het::Sequence seq;
    try {
      seq = het::load_sequence(dir);
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping " << dir << ": " << e.what() << "\n";
      ++skipped;
      continue;
    }
    const het::OpeResult result = het::run_ope(config, seq);
    write_results_csv(out_dir / "results" / (seq.name + ".csv"), result.boxes,
                      result.confidences);
    write_curve_csv(out_dir / "curves" / (seq.name + "_precision.csv"),
                    result.report.precision_curve, 1.0);
    write_curve_csv(out_dir / "curves" / (seq.name + "_success.csv"), result.report.success_curve,
                    0.05);
    std::ofstream(out_dir / "metrics" / (seq.name + ".json"))
        << het::report_to_json(result.report).dump(2) << "\n";

    auc_sum += result.report.success_auc;
    prec_sum += result.report.precision_at_20;
    ++evaluated;
    per_sequence.push_back({{"name", seq.name},
                            {"success_auc", result.report.success_auc},
                            {"precision_at_20", result.report.precision_at_20},
                            {"fps_decode_excluded",
                             static_cast<double>(result.boxes.size()) / result.track_seconds}});
    std::cout << seq.name << ": AUC " << result.report.success_auc << ", precision@20 "
              << result.report.precision_at_20 << "\n";
  }

  if (evaluated == 0) {
    std::cerr << "no sequence could be evaluated\n";
    return kExitIo;
  }
  nlohmann::json aggregate{{"tool", "het"},
                           {"version", kVersion},
                           {"config", het::config_to_json(config)},
                           {"sequences", std::move(per_sequence)},
                           {"skipped", skipped},
                           {"mean_success_auc", auc_sum / evaluated},
                           {"mean_precision_at_20", prec_sum / evaluated}};
  std::ofstream(out_dir / "aggregate.json") << aggregate.dump(2) << "\n";
  std::cout << "mean AUC " << auc_sum / evaluated << ", mean precision@20 "
            << prec_sum / evaluated << " over " << evaluated << " sequence(s)\n";
  return kExitOk;
}

int cmd_synth(const std::string& spec_file, const CommonOpts& opts, const std::string& out_dir) {
  het::ScenarioSpec spec = het::parse_scenario(spec_file);
  if (opts.seed_given) spec.seed = opts.seed;
  const het::Sequence seq = het::generate_synthetic(spec, out_dir);
  std::cout << "wrote " << seq.frames.size() << " frames to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical ensemble tracker"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string seq_dir, init_str, out_dir, config_file, spec_file;
  std::vector<std::string> seq_dirs;
  bool diag = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_file, "key=value config file");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides config file)")
        ->each([&](const std::string&) { opts.seed_given = true; });
    cmd->add_option("--stride", opts.stride, "search grid stride")
        ->each([&](const std::string&) { opts.stride_given = true; });
    cmd->add_flag("--predictive-search", opts.predictive_search,
                  "offset search centers by Kalman velocity");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* track = app.add_subcommand("track", "track one sequence");
  track->add_option("--seq", seq_dir, "sequence directory (img/ + groundtruth_rect.txt)")
      ->required();
  track->add_option("--init", init_str, "initial box X,Y,W,H (default: first ground-truth box)");
  track->add_flag("--diag", diag, "write per-frame diagnostics JSON-lines");
  add_common(track);

  CLI::App* eval = app.add_subcommand("eval", "run OPE evaluation over sequences");
  eval->add_option("--seq", seq_dirs, "sequence directories")->required()->expected(-1);
  add_common(eval);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence");
  synth->add_option("--spec", spec_file, "scenario key=value file")->required();
  add_common(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (track->parsed()) return cmd_track(seq_dir, init_str, opts, out_dir, diag);
    if (eval->parsed()) return cmd_eval(seq_dirs, opts, out_dir);
    if (synth->parsed()) return cmd_synth(spec_file, opts, out_dir);
  } catch (const het::TrackLostError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrackLost;
  } catch (const het::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const het::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const het::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
