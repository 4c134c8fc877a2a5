// Copyright 2026 The Polyform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Planar primitives in image pixel coordinates: x to the right, y down,
// origin at the top-left corner of the image (not the first pixel center).
//
// Orientation is reported by the sign of the shoelace area. A ring with
// positive area is called CCW (it appears clockwise on screen because y
// points down). Polygons keep their outer ring CCW and their holes CW.

#ifndef POLYFORM_GEOMETRY_H_
#define POLYFORM_GEOMETRY_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polyform {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
};

double Dot(Point2 a, Point2 b);
double Cross(Point2 a, Point2 b);
double Norm(Point2 v);
double Distance(Point2 a, Point2 b);

struct LineSegment {
  Point2 start;
  Point2 end;
};

enum class Orientation { kCCW, kCW };

// A closed ring of at least three vertices. The closing vertex is implicit:
// the first vertex is never repeated at the end. The orientation flag is
// derived from the signed area; a zero-area ring is reported as CCW.
class Ring {
 public:
  // Throws GeometryError if there are fewer than 3 vertices, a coordinate
  // is not finite, or two cyclically consecutive vertices coincide.
  explicit Ring(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  Orientation orientation() const { return orientation_; }

  // Edge i runs from vertex i to vertex (i + 1) mod size.
  LineSegment edge(std::size_t i) const;

  Ring Reversed() const;
  Ring WithOrientation(Orientation o) const;

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Point2> vertices_;
  Orientation orientation_;
};

// Outer ring plus holes. Construction normalizes orientation (outer CCW,
// holes CW) but does not check containment; see ValidatePolygon.
class Polygon {
 public:
  explicit Polygon(Ring outer, std::vector<Ring> holes = {});

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }

  std::size_t VertexCount() const;
  // All boundary edges, outer ring first, then holes in order.
  std::vector<LineSegment> Edges() const;
  // All vertices, outer ring first, then holes in order.
  std::vector<Point2> Vertices() const;

  Polygon Translated(Point2 offset) const;
  Polygon Scaled(double factor) const;
  Polygon Scaled(double sx, double sy) const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  Ring outer_;
  std::vector<Ring> holes_;
};

// Applies f to every vertex of every ring.
template <typename F>
Polygon MapVertices(const Polygon& poly, F&& f) {
  auto map_ring = [&f](const Ring& ring) {
    std::vector<Point2> v;
    v.reserve(ring.size());
    for (const Point2& p : ring.vertices()) v.push_back(f(p));
    return Ring(std::move(v));
  };
  std::vector<Ring> holes;
  holes.reserve(poly.holes().size());
  for (const Ring& h : poly.holes()) holes.push_back(map_ring(h));
  return Polygon(map_ring(poly.outer()), std::move(holes));
}

// Returns a description of the first violated invariant (hole outside the
// outer ring, overlapping holes), or nullopt if the polygon is valid.
std::optional<std::string> ValidatePolygon(const Polygon& poly);

struct Projection {
  Point2 foot;
  double t = 0.0;
  double distance = 0.0;
};

// Closest point on the segment. Throws GeometryError if start == end.
Projection ProjectPointToSegment(Point2 p, const LineSegment& seg);

struct NearestSegment {
  std::size_t index = 0;
  Point2 foot;
  double distance = 0.0;
};

// Exhaustive nearest segment; ties go to the lowest index. Throws
// GeometryError on an empty list or a degenerate segment.
NearestSegment FindNearestSegment(Point2 p,
                                  std::span<const LineSegment> segments);

struct VertexClassification {
  // Indices into Polygon::Vertices(), sorted ascending.
  std::vector<std::size_t> convex;
  std::vector<std::size_t> concave;
};

// Outer-ring vertices on the boundary of the outer ring's convex hull are
// convex, everything else (including every hole vertex) is concave.
VertexClassification ClassifyVertices(const Polygon& poly);

// Convex hull corners in CCW (positive area) order, collinear points
// dropped. Input may contain duplicates.
std::vector<Point2> ConvexHull(std::span<const Point2> points);

// Turning angle at `at`, in degrees within [0, 180], between the edge
// arriving from `prev` and the edge leaving towards `next`.
double TurnAngleDegrees(Point2 prev, Point2 at, Point2 next);

// Repeatedly removes the vertex with the smallest turning angle while that
// angle is <= angle_tol_deg. The result is a subsequence of the input.
// Returns nullopt when fewer than 3 vertices would remain.
std::optional<Ring> MergeCollinearEdges(const Ring& ring,
                                        double angle_tol_deg);

// Even-odd point-in-polygon; points on any boundary count as inside.
bool PointInRing(Point2 p, const Ring& ring);
bool PointInPolygon(Point2 p, const Polygon& poly);

bool PointOnSegment(Point2 p, const LineSegment& seg);

double SignedArea(std::span<const Point2> vertices);
double SignedArea(const Ring& ring);
// Outer area minus hole areas.
double Area(const Polygon& poly);

}  // namespace polyform

#endif  // POLYFORM_GEOMETRY_H_
