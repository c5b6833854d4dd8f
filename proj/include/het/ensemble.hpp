#pragma once

#include <span>
#include <vector>

#include "het/classifier.hpp"

namespace het {

// One local appearance model: classifier bank, fixed offset from the patch
// to the target center, and the most recent match. rel_offset is drawn at
// the first frame and never changes; the patch layout is rigid.
struct SubPatch {
  PatchClassifier classifier;
  Vec2 rel_offset;    // target_center - patch_upper_left, fixed at init
  Point location;     // upper-left of the most recent match
  double score = 0.0;
  double weight = 0.0;
  bool matched = false;  // search had an in-bounds candidate this frame
};

struct PatchSet {
  std::vector<SubPatch> patches;
  int patch_w = 0;
  int patch_h = 0;

  int count() const { return static_cast<int>(patches.size()); }
};

// Weighted-vote output of the middle layer: the measurement handed to the
// Kalman filter plus the mean normalized weight driving its noise adaptation.
struct Measurement {
  Vec2 center;
  double confidence = 0.0;  // mean of normalized weights, in [0.1, 0.9]
};

// Z-scores the vector, then affinely maps [min, max] onto [0.1, 0.9].
// All-equal scores map to uniform 0.5. Requires at least 2 scores.
std::vector<double> normalize_weights(std::span<const double> scores);

// center = (1/W) * sum(w_i * vote_i) with W = sum(w_i); each vote is one
// patch's target-center hypothesis (location + rel_offset). Requires
// weights in [0.1, 0.9] aligned with votes and W >= 1.
Measurement combine_votes(std::span<const Vec2> votes, std::span<const double> weights);

// Convenience over a freshly matched patch set; only patches flagged
// `matched` participate.
Measurement combine_votes(const PatchSet& patches, std::span<const double> weights);

}  // namespace het
