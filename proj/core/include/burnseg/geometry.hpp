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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace burnseg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned box in map units.
struct Box {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool empty() const { return !(max_x > min_x && max_y > min_y); }
};

std::optional<Box> intersect(const Box& a, const Box& b);

/// Closed ring; the closing vertex is implicit (first != last is allowed and
/// a duplicated closing vertex is tolerated).
using Ring = std::vector<Point>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

/// A set of polygons sharing one coordinate reference system.
struct PolygonSet {
  std::string crs_id;
  std::vector<Polygon> polygons;

  bool empty() const { return polygons.empty(); }
};

Box bounding_box(const Polygon& polygon);
/// Throws EMPTY_SET when the set has no vertices.
Box bounding_box(const PolygonSet& set);

/// Even-odd containment of a point in a ring (ray cast towards +x).
bool ring_contains(const Ring& ring, Point p);
/// Inside the outer ring and outside every hole.
bool polygon_contains(const Polygon& polygon, Point p);
bool set_contains(const PolygonSet& set, Point p);

double ring_area(const Ring& ring);  // unsigned
double polygon_area(const Polygon& polygon);

/// Area of polygon ∩ box (Sutherland-Hodgman against the convex box).
double clipped_area(const Polygon& polygon, const Box& box);
double clipped_area(const PolygonSet& set, const Box& box);

/// Rectangle polygon covering a box.
Polygon box_polygon(const Box& box);

/// Regular-ish polygon approximating a disc or ellipse; used by the synthetic
/// generator and tests.
Polygon ellipse_polygon(Point center, double radius_x, double radius_y, int vertices,
                        double rotation = 0.0);

/// Crossing x coordinates of the horizontal line y with every edge of `ring`,
/// using the same half-open rule as `ring_contains`. Appends to `out`.
void ring_crossings(const Ring& ring, double y, std::vector<double>& out);

}  // namespace burnseg
