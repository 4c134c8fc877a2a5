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

#include "polyform/polygonize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "components_internal.h"
#include "polyform/error.h"
#include "polyform/parallel.h"

namespace polyform {

void ValidatePolygonizeConfig(const PolygonizeConfig& config) {
  if (!(config.mask_threshold > 0.0 && config.mask_threshold < 1.0)) {
    throw ValidationError("mask threshold must be in (0, 1)");
  }
  if (config.top_k < 1) throw ValidationError("top-k must be >= 1");
  if (!(config.vertex_threshold > 0.0 && config.vertex_threshold < 1.0)) {
    throw ValidationError("vertex threshold must be in (0, 1)");
  }
  if (!(config.attract_dist > 0.0)) {
    throw ValidationError("attraction distance must be > 0");
  }
  if (!(config.merge_angle >= 0.0)) {
    throw ValidationError("merge angle must be >= 0");
  }
  if (!(config.scale > 0.0) || !std::isfinite(config.scale)) {
    throw ValidationError("scale must be > 0");
  }
  if (!(config.dp_fallback_tolerance >= 0.0)) {
    throw ValidationError("DP fallback tolerance must be >= 0");
  }
  if (config.workers < 1) throw ValidationError("workers must be >= 1");
}

// -----------------------------------------------------------------------------
// Vertex extraction
// -----------------------------------------------------------------------------

VertexSet ExtractVertices(const Grid<float>& heatmap,
                          const Grid<float>& offsets, int top_k,
                          double vertex_threshold) {
  if (!heatmap.SameExtent(offsets) || heatmap.channels() != 1 ||
      offsets.channels() != 2) {
    throw ValidationError("heatmap and offset grids do not match");
  }
  if (top_k < 1) throw ValidationError("top-k must be >= 1");
  const int h = heatmap.height();
  const int w = heatmap.width();

  VertexSet peaks;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const float v = heatmap.at(r, c);
      if (!(v > vertex_threshold)) continue;
      bool is_peak = true;
      for (int dr = -1; dr <= 1 && is_peak; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || !heatmap.Contains(r + dr, c + dc)) {
            continue;
          }
          const float n = heatmap.at(r + dr, c + dc);
          // A neighbor earlier in raster order wins a tie.
          const bool earlier = dr < 0 || (dr == 0 && dc < 0);
          if (n > v || (n == v && earlier)) {
            is_peak = false;
            break;
          }
        }
      }
      if (!is_peak) continue;
      peaks.push_back({{c + 0.5 + offsets.at(r, c, 0),
                        r + 0.5 + offsets.at(r, c, 1)},
                       static_cast<double>(v),
                       {r, c}});
    }
  }
  // Raster order is already ascending, so a stable sort keeps it for ties.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const ScoredVertex& a, const ScoredVertex& b) {
                     return a.score > b.score;
                   });
  if (peaks.size() > static_cast<std::size_t>(top_k)) {
    peaks.resize(static_cast<std::size_t>(top_k));
  }
  return peaks;
}

// -----------------------------------------------------------------------------
// Simplification
// -----------------------------------------------------------------------------

namespace {

// Drops cyclically consecutive duplicates.
std::vector<Point2> DedupeClosed(std::vector<Point2> pts) {
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

double DistanceToSegment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = Dot(d, d);
  if (len2 == 0.0) return Distance(p, a);
  const double t = Dot(p - a, d) / len2;
  if (t <= 0.0) return Distance(p, a);
  if (t >= 1.0) return Distance(p, b);
  // Cross-product form is exactly zero for collinear lattice points.
  return std::abs(Cross(d, p - a)) / std::sqrt(len2);
}

// Marks the points of pts[first..last] (indices modulo n) that survive
// Douglas-Peucker against the chord (first, last).
void DouglasPeuckerSpan(std::span<const Point2> pts, std::size_t first,
                        std::size_t last, double tolerance,
                        std::vector<bool>& keep) {
  const std::size_t n = pts.size();
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    const std::size_t span_len = (b + n - a) % n;
    if (span_len < 2) continue;
    double worst = -1.0;
    std::size_t worst_idx = a;
    for (std::size_t k = 1; k < span_len; ++k) {
      const std::size_t i = (a + k) % n;
      const double d = DistanceToSegment(pts[i], pts[a], pts[b]);
      if (d > worst) {
        worst = d;
        worst_idx = i;
      }
    }
    if (worst > tolerance) {
      keep[worst_idx] = true;
      stack.push_back({worst_idx, b});
      stack.push_back({a, worst_idx});
    }
  }
}

}  // namespace

std::optional<Ring> DouglasPeucker(std::span<const Point2> closed_points,
                                   double tolerance) {
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  const std::size_t n = closed_points.size();
  if (n < 3) return std::nullopt;

  // Split the loop at the first point and the point farthest from it.
  std::size_t far = 0;
  double far_dist = -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = Distance(closed_points[i], closed_points[0]);
    if (d > far_dist) {
      far_dist = d;
      far = i;
    }
  }
  std::vector<bool> keep(n, false);
  keep[0] = true;
  keep[far] = true;
  DouglasPeuckerSpan(closed_points, 0, far, tolerance, keep);
  DouglasPeuckerSpan(closed_points, far, 0, tolerance, keep);

  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(closed_points[i]);
  }
  out = DedupeClosed(std::move(out));
  if (out.size() < 3) return std::nullopt;
  return Ring(std::move(out));
}

std::optional<Ring> DouglasPeucker(const BoundaryChain& chain,
                                   double tolerance) {
  std::vector<Point2> pts;
  pts.reserve(chain.pixels.size());
  for (PixelCoord p : chain.pixels) pts.push_back(PixelCenter(p));
  return DouglasPeucker(pts, tolerance);
}

std::optional<Ring> MavAttractSimplify(const BoundaryChain& chain,
                                       const VertexSet& vertices,
                                       double attract_dist,
                                       double merge_angle) {
  if (vertices.empty() || chain.pixels.empty()) return std::nullopt;
  const std::size_t n = chain.pixels.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // (1) Nearest vertex for every chain pixel, ties to the lowest index.
  std::vector<std::size_t> match(n);
  std::vector<double> dist(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 x = PixelCenter(chain.pixels[k]);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      const double d = Distance(x, vertices[j].point);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    match[k] = best_j;
    dist[k] = best;
  }

  // (2) One representative pixel per matched vertex: the closest one, the
  // first in chain order on exact ties.
  std::vector<std::size_t> representative(vertices.size(), kNone);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t& rep = representative[match[k]];
    if (rep == kNone || dist[k] < dist[rep]) rep = k;
  }

  // (3) Drop representatives too far from their vertex and (4) replace the
  // rest by the vertex itself, in chain order.
  std::vector<Point2> snapped;
  for (std::size_t k = 0; k < n; ++k) {
    if (representative[match[k]] == k && dist[k] < attract_dist) {
      snapped.push_back(vertices[match[k]].point);
    }
  }
  snapped = DedupeClosed(std::move(snapped));
  if (snapped.size() < 3) return std::nullopt;

  // (5) Merge nearly parallel neighboring edges.
  return MergeCollinearEdges(Ring(std::move(snapped)), merge_angle);
}

// -----------------------------------------------------------------------------
// Pipeline
// -----------------------------------------------------------------------------

InstanceSet RescalePolygons(const InstanceSet& instances, double s) {
  if (!(s > 0.0)) throw ValidationError("scale must be > 0");
  InstanceSet out;
  out.reserve(instances.size());
  for (const Instance& inst : instances) {
    out.push_back({MapVertices(inst.polygon,
                               [s](Point2 p) { return Point2{p.x * s, p.y * s}; }),
                   inst.score});
  }
  return out;
}

namespace {

struct ComponentOutcome {
  std::optional<Instance> instance;
  int dropped_holes = 0;
  int fallback_rings = 0;
};

std::optional<Ring> SimplifyChain(const BoundaryChain& chain,
                                  const VertexSet& vertices,
                                  const PolygonizeConfig& config,
                                  int& fallbacks) {
  if (config.method == SimplifyMethod::kDouglasPeucker) {
    return DouglasPeucker(chain, config.dp_fallback_tolerance);
  }
  if (auto ring = MavAttractSimplify(chain, vertices, config.attract_dist,
                                     config.merge_angle)) {
    return ring;
  }
  ++fallbacks;
  return DouglasPeucker(chain, config.dp_fallback_tolerance);
}

std::vector<double> ComponentScores(const SoftMaskGrid& soft,
                                    const Components& comps) {
  std::vector<double> sum(comps.count + 1, 0.0);
  std::vector<std::int64_t> count(comps.count + 1, 0);
  for (int r = 0; r < soft.height(); ++r) {
    for (int c = 0; c < soft.width(); ++c) {
      const std::uint32_t l = comps.labels.at(r, c);
      if (l == 0) continue;
      sum[l] += soft.at(r, c);
      ++count[l];
    }
  }
  std::vector<double> score(comps.count + 1, 0.0);
  for (std::uint32_t l = 1; l <= comps.count; ++l) {
    if (count[l] > 0) score[l] = sum[l] / static_cast<double>(count[l]);
  }
  return score;
}

}  // namespace

PolygonizeResult PolygonizePipeline(const SoftMaskGrid& soft_mask,
                                    const Grid<float>& heatmap,
                                    const Grid<float>& offsets,
                                    const PolygonizeConfig& config) {
  ValidatePolygonizeConfig(config);
  if (!soft_mask.SameExtent(heatmap) || !soft_mask.SameExtent(offsets)) {
    throw ValidationError("mask, heatmap and offsets differ in size");
  }

  const Components comps = ConnectedComponents(
      ThresholdMask(soft_mask, config.mask_threshold), config.connectivity);
  const auto boxes = internal::ComponentBoxes(comps.labels, comps.count);
  const auto scores = ComponentScores(soft_mask, comps);
  VertexSet vertices;
  if (config.method == SimplifyMethod::kMavAttract) {
    vertices = ExtractVertices(heatmap, offsets, config.top_k,
                               config.vertex_threshold);
  }

  std::vector<ComponentOutcome> outcomes(comps.count);
  ParallelFor(comps.count, config.workers, [&](std::size_t slot) {
    const auto id = static_cast<std::uint32_t>(slot + 1);
    ComponentOutcome& out = outcomes[slot];
    const auto chains = internal::TraceComponent(comps.labels, id, boxes[id],
                                                 config.connectivity);
    if (chains.empty()) return;
    auto outer = SimplifyChain(chains[0], vertices, config, out.fallback_rings);
    if (!outer) return;

    std::vector<Ring> holes;
    for (std::size_t i = 1; i < chains.size(); ++i) {
      auto hole = SimplifyChain(chains[i], vertices, config, out.fallback_rings);
      const bool inside =
          hole && std::all_of(hole->vertices().begin(), hole->vertices().end(),
                              [&](Point2 p) { return PointInRing(p, *outer); });
      if (inside) {
        holes.push_back(std::move(*hole));
      } else {
        ++out.dropped_holes;
      }
    }
    Polygon poly(std::move(*outer), std::move(holes));
    if (config.scale != 1.0) {
      const double s = config.scale;
      poly = MapVertices(poly, [s](Point2 p) { return Point2{p.x * s, p.y * s}; });
    }
    out.instance = Instance{std::move(poly), scores[id]};
  });

  PolygonizeResult result;
  for (std::size_t slot = 0; slot < outcomes.size(); ++slot) {
    ComponentOutcome& out = outcomes[slot];
    result.dropped_holes += out.dropped_holes;
    result.fallback_rings += out.fallback_rings;
    if (out.instance) {
      result.instances.push_back(std::move(*out.instance));
      result.source_labels.push_back(static_cast<std::uint32_t>(slot + 1));
    } else {
      ++result.dropped_components;
    }
  }
  return result;
}

MaskInstances ExtractMaskInstances(const SoftMaskGrid& soft_mask,
                                   const PolygonizeConfig& config) {
  ValidatePolygonizeConfig(config);
  const double s_real = config.scale;
  const int s = static_cast<int>(std::lround(s_real));
  if (s < 1 || static_cast<double>(s) != s_real) {
    throw ValidationError("mask instances need an integral scale");
  }
  const Components comps = ConnectedComponents(
      ThresholdMask(soft_mask, config.mask_threshold), config.connectivity);
  const auto scores = ComponentScores(soft_mask, comps);

  MaskInstances out;
  if (s == 1) {
    out.masks = InstanceMasksFromLabels(comps.labels, comps.count);
  } else {
    LabelGrid up(soft_mask.height() * s, soft_mask.width() * s, 1, 0);
    for (int r = 0; r < up.height(); ++r) {
      for (int c = 0; c < up.width(); ++c) {
        up.at(r, c) = comps.labels.at(r / s, c / s);
      }
    }
    out.masks = InstanceMasksFromLabels(up, comps.count);
  }
  out.scores.assign(scores.begin() + 1, scores.end());
  return out;
}

}  // namespace polyform
