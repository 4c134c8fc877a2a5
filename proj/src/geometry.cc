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

#include "polyform/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polyform/error.h"

namespace polyform {

double Dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double Cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double Norm(Point2 v) { return std::hypot(v.x, v.y); }
double Distance(Point2 a, Point2 b) { return Norm(a - b); }

// -----------------------------------------------------------------------------
// Ring / Polygon
// -----------------------------------------------------------------------------

Ring::Ring(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw GeometryError("ring needs at least 3 vertices, got " +
                        std::to_string(vertices_.size()));
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2& v = vertices_[i];
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw GeometryError("ring vertex " + std::to_string(i) +
                          " is not finite");
    }
    if (v == vertices_[(i + 1) % vertices_.size()]) {
      throw GeometryError("ring vertices " + std::to_string(i) + " and " +
                          std::to_string((i + 1) % vertices_.size()) +
                          " coincide");
    }
  }
  orientation_ =
      SignedArea(vertices_) >= 0.0 ? Orientation::kCCW : Orientation::kCW;
}

LineSegment Ring::edge(std::size_t i) const {
  return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
}

Ring Ring::Reversed() const {
  // Keeps the first vertex in place.
  std::vector<Point2> v(vertices_);
  std::reverse(v.begin() + 1, v.end());
  return Ring(std::move(v));
}

Ring Ring::WithOrientation(Orientation o) const {
  return orientation_ == o ? *this : Reversed();
}

Polygon::Polygon(Ring outer, std::vector<Ring> holes)
    : outer_(outer.WithOrientation(Orientation::kCCW)) {
  holes_.reserve(holes.size());
  for (const Ring& h : holes) {
    holes_.push_back(h.WithOrientation(Orientation::kCW));
  }
}

std::size_t Polygon::VertexCount() const {
  std::size_t n = outer_.size();
  for (const Ring& h : holes_) n += h.size();
  return n;
}

std::vector<LineSegment> Polygon::Edges() const {
  std::vector<LineSegment> edges;
  edges.reserve(VertexCount());
  for (std::size_t i = 0; i < outer_.size(); ++i) edges.push_back(outer_.edge(i));
  for (const Ring& h : holes_) {
    for (std::size_t i = 0; i < h.size(); ++i) edges.push_back(h.edge(i));
  }
  return edges;
}

std::vector<Point2> Polygon::Vertices() const {
  std::vector<Point2> out(outer_.vertices());
  for (const Ring& h : holes_) {
    out.insert(out.end(), h.vertices().begin(), h.vertices().end());
  }
  return out;
}

namespace {

Ring TransformRing(const Ring& r, double sx, double sy, Point2 offset) {
  std::vector<Point2> v;
  v.reserve(r.size());
  for (const Point2& p : r.vertices()) {
    v.push_back({p.x * sx + offset.x, p.y * sy + offset.y});
  }
  return Ring(std::move(v));
}

Polygon TransformPolygon(const Polygon& poly, double sx, double sy,
                         Point2 offset) {
  std::vector<Ring> holes;
  for (const Ring& h : poly.holes()) {
    holes.push_back(TransformRing(h, sx, sy, offset));
  }
  return Polygon(TransformRing(poly.outer(), sx, sy, offset), std::move(holes));
}

// True when the open segments cross at a single interior point.
bool SegmentsProperlyCross(const LineSegment& a, const LineSegment& b) {
  const double d1 = Cross(a.end - a.start, b.start - a.start);
  const double d2 = Cross(a.end - a.start, b.end - a.start);
  const double d3 = Cross(b.end - b.start, a.start - b.start);
  const double d4 = Cross(b.end - b.start, a.end - b.start);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool RingsCross(const Ring& a, const Ring& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (SegmentsProperlyCross(a.edge(i), b.edge(j))) return true;
    }
  }
  return false;
}

bool OnRingBoundary(Point2 p, const Ring& ring) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (PointOnSegment(p, ring.edge(i))) return true;
  }
  return false;
}

// Strict interior test: false on the boundary.
bool StrictlyInsideRing(Point2 p, const Ring& ring) {
  return !OnRingBoundary(p, ring) && PointInRing(p, ring);
}

}  // namespace

Polygon Polygon::Translated(Point2 offset) const {
  return TransformPolygon(*this, 1.0, 1.0, offset);
}

Polygon Polygon::Scaled(double factor) const {
  return TransformPolygon(*this, factor, factor, {});
}

Polygon Polygon::Scaled(double sx, double sy) const {
  return TransformPolygon(*this, sx, sy, {});
}

std::optional<std::string> ValidatePolygon(const Polygon& poly) {
  const auto& holes = poly.holes();
  for (std::size_t h = 0; h < holes.size(); ++h) {
    for (const Point2& v : holes[h].vertices()) {
      if (!PointInRing(v, poly.outer())) {
        std::ostringstream msg;
        msg << "hole " << h << " has a vertex outside the outer ring";
        return msg.str();
      }
    }
    if (RingsCross(holes[h], poly.outer())) {
      return "hole " + std::to_string(h) + " crosses the outer ring";
    }
    for (std::size_t k = h + 1; k < holes.size(); ++k) {
      if (RingsCross(holes[h], holes[k])) {
        return "holes " + std::to_string(h) + " and " + std::to_string(k) +
               " cross";
      }
      const bool nested =
          std::any_of(holes[h].vertices().begin(), holes[h].vertices().end(),
                      [&](Point2 v) { return StrictlyInsideRing(v, holes[k]); }) ||
          std::any_of(holes[k].vertices().begin(), holes[k].vertices().end(),
                      [&](Point2 v) { return StrictlyInsideRing(v, holes[h]); });
      if (nested) {
        return "holes " + std::to_string(h) + " and " + std::to_string(k) +
               " overlap";
      }
    }
  }
  return std::nullopt;
}

// -----------------------------------------------------------------------------
// Projection
// -----------------------------------------------------------------------------

Projection ProjectPointToSegment(Point2 p, const LineSegment& seg) {
  const Point2 d = seg.end - seg.start;
  const double len2 = Dot(d, d);
  if (len2 == 0.0) throw GeometryError("degenerate segment: start == end");
  double t = Dot(p - seg.start, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  // Exact endpoints when clamped, so on-segment checks downstream hold.
  Point2 foot = t == 0.0   ? seg.start
                : t == 1.0 ? seg.end
                           : seg.start + t * d;
  return {foot, t, Distance(p, foot)};
}

NearestSegment FindNearestSegment(Point2 p,
                                  std::span<const LineSegment> segments) {
  if (segments.empty()) throw GeometryError("no segments");
  NearestSegment best;
  bool first = true;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Projection proj = ProjectPointToSegment(p, segments[i]);
    if (first || proj.distance < best.distance) {
      best = {i, proj.foot, proj.distance};
      first = false;
    }
  }
  return best;
}

// -----------------------------------------------------------------------------
// Convexity
// -----------------------------------------------------------------------------

std::vector<Point2> ConvexHull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  // Andrew's monotone chain.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && Cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = pts[i];
    while (k >= lower && Cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) {
      --k;
    }
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

VertexClassification ClassifyVertices(const Polygon& poly) {
  const auto& outer = poly.outer().vertices();
  const std::vector<Point2> hull = ConvexHull(outer);

  auto on_hull = [&](Point2 p) {
    if (hull.size() < 3) {
      return hull.size() < 2 || PointOnSegment(p, {hull[0], hull[1]});
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
      if (PointOnSegment(p, {hull[i], hull[(i + 1) % hull.size()]})) {
        return true;
      }
    }
    return false;
  };

  VertexClassification out;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    (on_hull(outer[i]) ? out.convex : out.concave).push_back(i);
  }
  const std::size_t total = poly.VertexCount();
  for (std::size_t i = outer.size(); i < total; ++i) out.concave.push_back(i);
  return out;
}

// -----------------------------------------------------------------------------
// Collinear merging
// -----------------------------------------------------------------------------

double TurnAngleDegrees(Point2 prev, Point2 at, Point2 next) {
  const Point2 a = at - prev;
  const Point2 b = next - at;
  const double rad = std::atan2(std::abs(Cross(a, b)), Dot(a, b));
  return rad * 180.0 / std::numbers::pi;
}

std::optional<Ring> MergeCollinearEdges(const Ring& ring,
                                        double angle_tol_deg) {
  if (!(angle_tol_deg >= 0.0)) {
    throw ValidationError("merge angle must be >= 0");
  }
  std::vector<Point2> v = ring.vertices();
  auto angle_at = [&v](std::size_t i) {
    const std::size_t n = v.size();
    return TurnAngleDegrees(v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
  };
  std::vector<double> angles(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) angles[i] = angle_at(i);

  while (true) {
    const auto it = std::min_element(angles.begin(), angles.end());
    if (*it > angle_tol_deg) break;
    if (v.size() <= 3) return std::nullopt;
    const std::size_t i = static_cast<std::size_t>(it - angles.begin());
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    angles.erase(angles.begin() + static_cast<std::ptrdiff_t>(i));
    const std::size_t n = v.size();
    const std::size_t before = (i + n - 1) % n;
    const std::size_t after = i % n;
    angles[before] = angle_at(before);
    angles[after] = angle_at(after);
  }
  return Ring(std::move(v));
}

// -----------------------------------------------------------------------------
// Containment and area
// -----------------------------------------------------------------------------

bool PointOnSegment(Point2 p, const LineSegment& seg) {
  if (Cross(seg.end - seg.start, p - seg.start) != 0.0) return false;
  return p.x >= std::min(seg.start.x, seg.end.x) &&
         p.x <= std::max(seg.start.x, seg.end.x) &&
         p.y >= std::min(seg.start.y, seg.end.y) &&
         p.y <= std::max(seg.start.y, seg.end.y);
}

bool PointInRing(Point2 p, const Ring& ring) {
  const auto& v = ring.vertices();
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (PointOnSegment(p, {v[j], v[i]})) return true;
    if ((v[i].y > p.y) != (v[j].y > p.y) &&
        p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x) {
      inside = !inside;
    }
  }
  return inside;
}

bool PointInPolygon(Point2 p, const Polygon& poly) {
  if (!PointInRing(p, poly.outer())) return false;
  for (const Ring& h : poly.holes()) {
    if (OnRingBoundary(p, h)) return true;
    if (PointInRing(p, h)) return false;
  }
  return true;
}

namespace {

// Correctly rounded sum (Shewchuk's partials with a half-even final step),
// so the result does not depend on term order: reversing a ring negates
// its area exactly.
double ExactSum(std::span<const double> terms) {
  std::vector<double> partials;
  for (double x : terms) {
    std::size_t used = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  std::size_t n = partials.size();
  if (n == 0) return 0.0;
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) ||
                (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace

double SignedArea(std::span<const Point2> vertices) {
  const std::size_t n = vertices.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = Cross(vertices[i], vertices[(i + 1) % n]);
  }
  return 0.5 * ExactSum(terms);
}

double SignedArea(const Ring& ring) { return SignedArea(ring.vertices()); }

double Area(const Polygon& poly) {
  double a = std::abs(SignedArea(poly.outer()));
  for (const Ring& h : poly.holes()) a -= std::abs(SignedArea(h));
  return a;
}

}  // namespace polyform
