#pragma once

#include <cmath>

namespace het {

// Integer pixel coordinate (absolute image space).
struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Real-valued 2-D vector (sub-pixel centers, offsets, velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Rectangle relative to an enclosing region's upper-left corner.
// One template serves every candidate placement; absolute positioning
// happens at lookup time.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Axis-aligned bounding box in absolute image space, upper-left convention.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  friend bool operator==(const Box&, const Box&) = default;
};

inline Vec2 box_center(const Box& b) {
  return {b.x + 0.5 * b.w, b.y + 0.5 * b.h};
}

}  // namespace het
