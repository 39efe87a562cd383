// Copyright 2026 The burnseg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "burnseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "burnseg/error.hpp"

namespace burnseg {

std::optional<Box> intersect(const Box& a, const Box& b) {
  Box out{std::max(a.min_x, b.min_x), std::max(a.min_y, b.min_y), std::min(a.max_x, b.max_x),
          std::min(a.max_y, b.max_y)};
  if (out.empty()) {
    return std::nullopt;
  }
  return out;
}

namespace {

void extend(Box& box, const Ring& ring) {
  for (const Point& p : ring) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
}

Box inverted_box() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Box{inf, inf, -inf, -inf};
}

double signed_area(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 3) {
    return 0.0;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

// One Sutherland-Hodgman pass against the half-plane `inside`.
template <typename Inside, typename Cross>
Ring clip_pass(const Ring& input, Inside inside, Cross cross) {
  Ring out;
  const std::size_t n = input.size();
  if (n == 0) {
    return out;
  }
  out.reserve(n + 4);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = input[i];
    const Point& prev = input[(i + n - 1) % n];
    const bool cur_in = inside(cur);
    const bool prev_in = inside(prev);
    if (cur_in) {
      if (!prev_in) {
        out.push_back(cross(prev, cur));
      }
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(cross(prev, cur));
    }
  }
  return out;
}

Ring clip_ring(const Ring& ring, const Box& box) {
  auto at_x = [](double x) {
    return [x](const Point& a, const Point& b) {
      const double t = (x - a.x) / (b.x - a.x);
      return Point{x, a.y + t * (b.y - a.y)};
    };
  };
  auto at_y = [](double y) {
    return [y](const Point& a, const Point& b) {
      const double t = (y - a.y) / (b.y - a.y);
      return Point{a.x + t * (b.x - a.x), y};
    };
  };
  Ring r = clip_pass(ring, [&](const Point& p) { return p.x >= box.min_x; }, at_x(box.min_x));
  r = clip_pass(r, [&](const Point& p) { return p.x <= box.max_x; }, at_x(box.max_x));
  r = clip_pass(r, [&](const Point& p) { return p.y >= box.min_y; }, at_y(box.min_y));
  r = clip_pass(r, [&](const Point& p) { return p.y <= box.max_y; }, at_y(box.max_y));
  return r;
}

}  // namespace

Box bounding_box(const Polygon& polygon) {
  Box box = inverted_box();
  extend(box, polygon.outer);
  return box;
}

Box bounding_box(const PolygonSet& set) {
  Box box = inverted_box();
  for (const Polygon& polygon : set.polygons) {
    extend(box, polygon.outer);
  }
  require(box.min_x <= box.max_x, ErrorCode::kEmptySet, "polygon set has no vertices");
  return box;
}

bool ring_contains(const Ring& ring, Point p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

void ring_crossings(const Ring& ring, double y, std::vector<double>& out) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > y) != (b.y > y)) {
      out.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
  }
}

bool polygon_contains(const Polygon& polygon, Point p) {
  if (!ring_contains(polygon.outer, p)) {
    return false;
  }
  return std::none_of(polygon.holes.begin(), polygon.holes.end(),
                      [&](const Ring& hole) { return ring_contains(hole, p); });
}

bool set_contains(const PolygonSet& set, Point p) {
  return std::any_of(set.polygons.begin(), set.polygons.end(),
                     [&](const Polygon& polygon) { return polygon_contains(polygon, p); });
}

double ring_area(const Ring& ring) { return std::abs(signed_area(ring)); }

double polygon_area(const Polygon& polygon) {
  double area = ring_area(polygon.outer);
  for (const Ring& hole : polygon.holes) {
    area -= ring_area(hole);
  }
  return area;
}

double clipped_area(const Polygon& polygon, const Box& box) {
  double area = ring_area(clip_ring(polygon.outer, box));
  for (const Ring& hole : polygon.holes) {
    area -= ring_area(clip_ring(hole, box));
  }
  return std::max(area, 0.0);
}

double clipped_area(const PolygonSet& set, const Box& box) {
  double area = 0.0;
  for (const Polygon& polygon : set.polygons) {
    area += clipped_area(polygon, box);
  }
  return area;
}

Polygon box_polygon(const Box& box) {
  return Polygon{{{box.min_x, box.min_y},
                  {box.max_x, box.min_y},
                  {box.max_x, box.max_y},
                  {box.min_x, box.max_y}},
                 {}};
}

Polygon ellipse_polygon(Point center, double radius_x, double radius_y, int vertices,
                        double rotation) {
  Polygon polygon;
  polygon.outer.reserve(static_cast<std::size_t>(vertices));
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  for (int k = 0; k < vertices; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / vertices;
    const double dx = radius_x * std::cos(theta);
    const double dy = radius_y * std::sin(theta);
    polygon.outer.push_back({center.x + c * dx - s * dy, center.y + s * dx + c * dy});
  }
  return polygon;
}

}  // namespace burnseg
