#include "het/projection.hpp"

#include <cmath>
#include <string>

#include "het/errors.hpp"
#include "het/rng.hpp"

namespace het {

namespace {

// Log-uniform in [2, limit]; rectangle filters of many sizes give the
// multiscale coverage the feature space is built from.
int draw_extent(Rng& rng, int limit) {
  if (limit <= 2) return 2;
  const double lo = std::log(2.0);
  const double hi = std::log(static_cast<double>(limit) + 1.0);
  const int v = static_cast<int>(std::exp(rng.uniform(lo, hi)));
  return v < 2 ? 2 : (v > limit ? limit : v);
}

}  // namespace

SparseProjection generate_projection(std::uint64_t seed, int m, int z_max, int patch_w,
                                     int patch_h) {
  if (m < 1) throw ConfigError("projection needs m >= 1 rows");
  if (z_max < 2) throw ConfigError("z_max must be >= 2");
  if (patch_w < 2 || patch_h < 2) {
    throw ConfigError("patch too small to host a 2x2 rectangle: " + std::to_string(patch_w) +
                      "x" + std::to_string(patch_h));
  }
  SparseProjection proj;
  proj.patch_w = patch_w;
  proj.patch_h = patch_h;
  proj.seed = seed;
  proj.z_max = z_max;
  proj.rows.resize(m);

  Rng rng(seed);
  for (auto& row : proj.rows) {
    const int k = rng.uniform_int(2, z_max);
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(k));
    row.entries.resize(k);
    for (auto& entry : row.entries) {
      const int w = draw_extent(rng, patch_w);
      const int h = draw_extent(rng, patch_h);
      const int x = rng.uniform_int(0, patch_w - w);
      const int y = rng.uniform_int(0, patch_h - h);
      entry.rect = Rect{x, y, w, h};
      entry.weight = rng.coin() ? magnitude : -magnitude;
    }
  }
  return proj;
}

CompressedFeature compress(const SparseProjection& proj, const IntegralImage& ii,
                           Point patch_origin) {
  if (patch_origin.x < 0 || patch_origin.y < 0 || patch_origin.x + proj.patch_w > ii.width() ||
      patch_origin.y + proj.patch_h > ii.height()) {
    throw BoundsError("patch out of image bounds");
  }
  CompressedFeature values(proj.rows.size());
  const CompiledProjection compiled(proj, ii.padded_stride());
  const std::size_t base =
      static_cast<std::size_t>(patch_origin.y) * ii.padded_stride() + patch_origin.x;
  compiled.compress_into(ii.padded_data(), base, values);
  return values;
}

CompiledProjection::CompiledProjection(const SparseProjection& proj, int padded_stride)
    : patch_w_(proj.patch_w), patch_h_(proj.patch_h) {
  row_begin_.clear();
  row_begin_.reserve(proj.rows.size() + 1);
  row_begin_.push_back(0);
  for (const auto& row : proj.rows) {
    for (const auto& e : row.entries) {
      const int x0 = e.rect.x;
      const int y0 = e.rect.y;
      const int x1 = e.rect.x + e.rect.w;
      const int y1 = e.rect.y + e.rect.h;
      entries_.push_back(FlatEntry{
          static_cast<std::int32_t>(y0 * padded_stride + x0),
          static_cast<std::int32_t>(y0 * padded_stride + x1),
          static_cast<std::int32_t>(y1 * padded_stride + x0),
          static_cast<std::int32_t>(y1 * padded_stride + x1),
          e.weight,
      });
    }
    row_begin_.push_back(static_cast<int>(entries_.size()));
  }
}

}  // namespace het
