#include "het/image.hpp"

#include <cmath>
#include <string>

#include "het/errors.hpp"

namespace het {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("frame dimensions must be >= 1, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

}  // namespace

Frame::Frame(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, 0);
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("frame data length does not match dimensions");
  }
}

IntegralImage::IntegralImage(const Frame& frame)
    : width_(frame.width()), height_(frame.height()), stride_(frame.width() + 1) {
  table_.assign(static_cast<std::size_t>(stride_) * (height_ + 1), 0);
  const auto pixels = frame.data();
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* src = pixels.data() + static_cast<std::size_t>(y) * width_;
    const std::int64_t* above = table_.data() + static_cast<std::size_t>(y) * stride_;
    std::int64_t* out = table_.data() + static_cast<std::size_t>(y + 1) * stride_;
    std::int64_t row_sum = 0;
    for (int x = 0; x < width_; ++x) {
      row_sum += src[x];
      out[x + 1] = above[x + 1] + row_sum;
    }
  }
}

Frame to_grayscale(std::span<const std::uint8_t> rgb, int width, int height) {
  check_dims(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (rgb.size() != 3 * n) {
    throw DimensionError("RGB raster length does not match dimensions");
  }
  std::vector<std::uint8_t> gray(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y =
        0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    const long v = std::lround(y);
    gray[i] = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
  }
  return Frame(width, height, std::move(gray));
}

Frame to_grayscale(const Frame& gray) { return gray; }

IntegralImage build_integral(const Frame& frame) { return IntegralImage(frame); }

std::int64_t rect_sum(const IntegralImage& ii, Point origin, const Rect& r) {
  if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0) {
    throw BoundsError("rectangle must have positive extent and non-negative offsets");
  }
  const int x0 = origin.x + r.x;
  const int y0 = origin.y + r.y;
  if (x0 < 0 || y0 < 0 || x0 + r.w > ii.width() || y0 + r.h > ii.height()) {
    throw BoundsError("rectangle out of image bounds");
  }
  const std::int64_t* t = ii.padded_data();
  const int s = ii.padded_stride();
  const std::int64_t* top = t + static_cast<std::size_t>(y0) * s;
  const std::int64_t* bot = t + static_cast<std::size_t>(y0 + r.h) * s;
  return bot[x0 + r.w] - top[x0 + r.w] - bot[x0] + top[x0];
}

}  // namespace het
