#include "het/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "het/errors.hpp"
#include "het/image_io.hpp"

namespace het {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double overlap(const Box& a, const Box& b) {
  if (a.w <= 0 || a.h <= 0 || b.w <= 0 || b.h <= 0) {
    throw ContractError("overlap requires boxes with positive extent");
  }
  const int ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const int iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = static_cast<double>(ix) * iy;
  const double uni = static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
  return inter / uni;
}

double center_error(const Box& a, const Box& b) {
  const Vec2 ca = box_center(a);
  const Vec2 cb = box_center(b);
  return norm(ca - cb);
}

MetricReport compute_metrics(std::span<const Box> predicted, std::span<const Box> ground_truth) {
  if (predicted.size() != ground_truth.size()) {
    throw ContractError("predicted and ground-truth lengths differ");
  }
  if (predicted.empty()) throw ContractError("empty evaluation");

  MetricReport report;
  report.center_errors.reserve(predicted.size());
  report.overlaps.reserve(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    report.center_errors.push_back(center_error(predicted[i], ground_truth[i]));
    report.overlaps.push_back(overlap(predicted[i], ground_truth[i]));
  }

  const double n = static_cast<double>(predicted.size());
  report.precision_curve.resize(51);
  for (int t = 0; t <= 50; ++t) {
    const auto hits = std::count_if(report.center_errors.begin(), report.center_errors.end(),
                                    [&](double e) { return e <= static_cast<double>(t); });
    report.precision_curve[t] = static_cast<double>(hits) / n;
  }
  report.success_curve.resize(21);
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.05 * i;
    const auto hits = std::count_if(report.overlaps.begin(), report.overlaps.end(),
                                    [&](double o) { return o >= t; });
    report.success_curve[i] = static_cast<double>(hits) / n;
  }
  report.success_auc = 0.0;
  for (double s : report.success_curve) report.success_auc += s;
  report.success_auc /= static_cast<double>(report.success_curve.size());
  report.precision_at_20 = report.precision_curve[20];
  return report;
}

OpeResult run_ope(const TrackerConfig& config, const Sequence& seq) {
  if (seq.frames.empty()) throw ContractError("sequence has no frames");
  if (seq.ground_truth.size() != seq.frames.size()) {
    throw ContractError("ground-truth length does not match frame count");
  }

  OpeResult result;
  result.boxes.reserve(seq.frames.size());
  result.confidences.reserve(seq.frames.size());

  auto t0 = std::chrono::steady_clock::now();
  Frame first = load_frame(seq.frames[0]);
  result.decode_seconds += elapsed_seconds(t0);

  t0 = std::chrono::steady_clock::now();
  Tracker tracker(first, seq.ground_truth[0], config);
  result.track_seconds += elapsed_seconds(t0);
  result.boxes.push_back(seq.ground_truth[0]);
  result.confidences.push_back(0.0);

  bool lost = false;
  Box frozen = seq.ground_truth[0];
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    if (lost) {
      result.boxes.push_back(frozen);
      result.confidences.push_back(0.0);
      continue;
    }
    t0 = std::chrono::steady_clock::now();
    Frame frame = load_frame(seq.frames[i]);
    result.decode_seconds += elapsed_seconds(t0);

    t0 = std::chrono::steady_clock::now();
    try {
      const TrackOutput out = tracker.step(frame);
      result.track_seconds += elapsed_seconds(t0);
      result.boxes.push_back(out.box);
      result.confidences.push_back(out.measurement.confidence);
      frozen = out.box;
    } catch (const TrackLostError&) {
      result.track_seconds += elapsed_seconds(t0);
      lost = true;
      result.boxes.push_back(frozen);
      result.confidences.push_back(0.0);
    }
  }
  result.report = compute_metrics(result.boxes, seq.ground_truth);
  return result;
}

Sequence load_sequence(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();

  const fs::path img_dir = dir / "img";
  if (!fs::is_directory(img_dir)) throw IoError("no img/ directory under " + dir.string());
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".pgm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp") {
      seq.frames.push_back(entry.path());
    }
  }
  std::sort(seq.frames.begin(), seq.frames.end());
  if (seq.frames.empty()) throw IoError("no frames under " + img_dir.string());

  const fs::path gt_path = dir / "groundtruth_rect.txt";
  std::ifstream gt(gt_path);
  if (!gt) throw IoError("cannot open " + gt_path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(gt, line)) {
    ++line_no;
    for (auto& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream is(line);
    double x, y, w, h;
    if (!(is >> x >> y >> w >> h)) {
      if (line.find_first_not_of(" \r\n") == std::string::npos) continue;  // blank line
      throw ParseError("bad ground-truth line " + std::to_string(line_no) + " in " +
                       gt_path.string());
    }
    // OTB convention: 1-based origin on disk.
    seq.ground_truth.push_back(Box{static_cast<int>(std::lround(x)) - 1,
                                   static_cast<int>(std::lround(y)) - 1,
                                   static_cast<int>(std::lround(w)),
                                   static_cast<int>(std::lround(h))});
  }
  if (seq.ground_truth.size() != seq.frames.size()) {
    throw ParseError("ground-truth count " + std::to_string(seq.ground_truth.size()) +
                     " != frame count " + std::to_string(seq.frames.size()) + " in " +
                     dir.string());
  }

  const fs::path attr_path = dir / "attributes.txt";
  if (fs::exists(attr_path)) {
    std::ifstream attrs(attr_path);
    std::string tag;
    while (attrs >> tag) seq.attributes.push_back(tag);
  }
  return seq;
}

}  // namespace het
