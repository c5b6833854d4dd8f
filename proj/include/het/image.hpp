#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "het/geometry.hpp"

namespace het {

// 8-bit grayscale raster, row-major.
class Frame {
 public:
  Frame(int width, int height);
  Frame(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Cumulative-sum table over a frame, 64-bit per cell so overflow is
// impossible at any realistic resolution. at(x, y) is the sum of all
// intensities in [0..x] x [0..y] inclusive. Stored internally with one
// extra zero row/column so rectangle sums need no boundary branches.
class IntegralImage {
 public:
  explicit IntegralImage(const Frame& frame);

  int width() const { return width_; }
  int height() const { return height_; }

  std::int64_t at(int x, int y) const {
    return table_[static_cast<std::size_t>(y + 1) * stride_ + (x + 1)];
  }

  // Padded layout, for precompiled feature offsets.
  int padded_stride() const { return stride_; }
  const std::int64_t* padded_data() const { return table_.data(); }

 private:
  int width_;
  int height_;
  int stride_;  // width_ + 1
  std::vector<std::int64_t> table_;
};

// Luminance reduction of an interleaved 8-bit RGB raster:
// round(0.299 R + 0.587 G + 0.114 B), clamped to [0, 255].
Frame to_grayscale(std::span<const std::uint8_t> rgb, int width, int height);

Frame to_grayscale(const Frame& gray);  // already gray: copies through

IntegralImage build_integral(const Frame& frame);

// Sum of intensities over rect `r` placed at absolute `origin`,
// four table lookups. Throws BoundsError if the rectangle does not fit.
std::int64_t rect_sum(const IntegralImage& ii, Point origin, const Rect& r);

}  // namespace het
