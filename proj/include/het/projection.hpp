#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "het/image.hpp"

namespace het {

using CompressedFeature = std::vector<double>;

// One row of the sparse measurement matrix: 2..z_max signed rectangles.
// Weights are +-1/sqrt(k) for k entries; the per-row positive scale is a
// deliberate reparameterization — the Gaussian weak classifiers learn
// per-feature mean/variance, so any row scale is absorbed downstream.
struct ProjectionEntry {
  Rect rect;
  double weight = 0.0;
  friend bool operator==(const ProjectionEntry&, const ProjectionEntry&) = default;
};

struct ProjectionRow {
  std::vector<ProjectionEntry> entries;
  friend bool operator==(const ProjectionRow&, const ProjectionRow&) = default;
};

// Fixed sparse random measurement matrix, realized as per-row rectangle
// lists over a patch_w x patch_h template. The implicit high-dimensional
// multiscale feature space is never materialized; features are evaluated
// lazily through integral images. Immutable once generated and fully
// determined by (seed, m, z_max, patch_w, patch_h).
struct SparseProjection {
  std::vector<ProjectionRow> rows;
  int patch_w = 0;
  int patch_h = 0;
  std::uint64_t seed = 0;
  int z_max = 0;

  int feature_count() const { return static_cast<int>(rows.size()); }
  friend bool operator==(const SparseProjection&, const SparseProjection&) = default;
};

// Draws m rows; each row gets k ~ U{2..z_max} rectangles with log-uniform
// sizes (min 2x2, capped at the patch), uniform positions, and equiprobable
// signs of magnitude 1/sqrt(k).
SparseProjection generate_projection(std::uint64_t seed, int m, int z_max, int patch_w,
                                     int patch_h);

// values[i] = sum_j weight_ij * rect_sum(ii, patch_origin + rect_ij).
// Throws BoundsError if the patch does not fit at `patch_origin`.
CompressedFeature compress(const SparseProjection& proj, const IntegralImage& ii,
                           Point patch_origin);

// Projection rows flattened to linear offsets into an integral table of a
// known stride. This is the per-candidate hot path: four loads and one
// fused multiply-add per rectangle, no bounds checks, no allocation.
class CompiledProjection {
 public:
  CompiledProjection() = default;
  CompiledProjection(const SparseProjection& proj, int padded_stride);

  int feature_count() const { return static_cast<int>(row_begin_.size()) - 1; }
  int patch_w() const { return patch_w_; }
  int patch_h() const { return patch_h_; }

  // `base` is the padded-table index of the patch's upper-left corner:
  // origin.y * stride + origin.x. Caller guarantees the patch fits.
  void compress_into(const std::int64_t* padded, std::size_t base,
                     std::span<double> out) const {
    for (std::size_t i = 0; i + 1 < row_begin_.size(); ++i) {
      double acc = 0.0;
      for (int j = row_begin_[i]; j < row_begin_[i + 1]; ++j) {
        const FlatEntry& e = entries_[j];
        const std::int64_t sum =
            padded[base + e.d11] - padded[base + e.d01] - padded[base + e.d10] +
            padded[base + e.d00];
        acc += e.weight * static_cast<double>(sum);
      }
      out[i] = acc;
    }
  }

 private:
  struct FlatEntry {
    std::int32_t d00, d01, d10, d11;
    double weight;
  };
  std::vector<FlatEntry> entries_;
  std::vector<int> row_begin_{0};
  int patch_w_ = 0;
  int patch_h_ = 0;
};

}  // namespace het
