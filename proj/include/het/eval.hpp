#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "het/tracker.hpp"

namespace het {

// A benchmark sequence: ordered frame files plus per-frame ground truth.
struct Sequence {
  std::string name;
  std::vector<std::filesystem::path> frames;
  std::vector<Box> ground_truth;
  std::vector<std::string> attributes;  // OCC, DEF, BC, SV, FM, IV, ...
};

struct MetricReport {
  std::vector<double> center_errors;       // px, per frame
  std::vector<double> overlaps;            // [0,1], per frame
  std::vector<double> precision_curve;     // thresholds 0..50 px step 1
  std::vector<double> success_curve;       // overlap thresholds 0..1 step 0.05
  double success_auc = 0.0;                // mean of the sampled success values
  double precision_at_20 = 0.0;
};

// PASCAL VOC overlap: area of intersection over area of union; 0 when
// disjoint. Both boxes need positive extent.
double overlap(const Box& a, const Box& b);

// Euclidean distance between box centers.
double center_error(const Box& a, const Box& b);

MetricReport compute_metrics(std::span<const Box> predicted, std::span<const Box> ground_truth);

struct OpeResult {
  std::vector<Box> boxes;          // per-frame tracker output (frame 1 = init box)
  std::vector<double> confidences; // 0 for frame 1 and any frozen frames
  MetricReport report;
  double decode_seconds = 0.0;     // image load + decode
  double track_seconds = 0.0;      // init + step, decode excluded
};

// One-pass evaluation: init on the first ground-truth box, step through all
// frames. A lost track freezes the last box (scored as-is) from loss onward.
OpeResult run_ope(const TrackerConfig& config, const Sequence& seq);

// Loads `dir/img/*` (sorted) + `dir/groundtruth_rect.txt` (x,y,w,h per line,
// comma or whitespace separated, 1-based origin converted to 0-based) and
// optional `dir/attributes.txt` tags.
Sequence load_sequence(const std::filesystem::path& dir);

}  // namespace het
