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

// Raster-to-polygon inference: threshold the soft mask, split it into
// connected components, trace each component's boundary pixels, then
// simplify every traced chain by attracting it to the detected vertices
// (Mask-and-Vertices Attraction), with Douglas-Peucker as fallback and as a
// standalone baseline.

#ifndef POLYFORM_POLYGONIZE_H_
#define POLYFORM_POLYGONIZE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polyform/geometry.h"
#include "polyform/grid.h"
#include "polyform/instance.h"
#include "polyform/raster.h"

namespace polyform {

enum class Connectivity { kFour, kEight };

enum class SimplifyMethod {
  kMavAttract,      // snap chains to detected vertices
  kDouglasPeucker,  // DP on the traced chain, ignores vertex maps
};

struct PolygonizeConfig {
  double mask_threshold = 0.5;
  int top_k = 300;
  double vertex_threshold = 0.008;
  double attract_dist = 5.0;  // pixels of the input grids
  double merge_angle = 10.0;  // degrees
  double scale = 1.0;         // output coordinates are multiplied by this
  Connectivity connectivity = Connectivity::kEight;
  double dp_fallback_tolerance = 1.0;
  SimplifyMethod method = SimplifyMethod::kMavAttract;
  int workers = 1;
};

// Throws ValidationError on the first invalid field.
void ValidatePolygonizeConfig(const PolygonizeConfig& config);

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

inline Point2 PixelCenter(PixelCoord p) { return {p.col + 0.5, p.row + 0.5}; }

enum class RingKind { kOuter, kHole };

// Closed sequence of component pixels; the last pixel connects back to the
// first. Consecutive pixels are 8-neighbors. A pixel may appear more than
// once where the component is one pixel wide.
struct BoundaryChain {
  std::vector<PixelCoord> pixels;
  RingKind kind = RingKind::kOuter;
};

struct ScoredVertex {
  Point2 point;
  double score = 0.0;
  PixelCoord source;
};

// Sorted by descending score, ties in raster order.
using VertexSet = std::vector<ScoredVertex>;

// 1 iff value > tau.
MaskGrid ThresholdMask(const SoftMaskGrid& soft, double tau);

struct Components {
  LabelGrid labels;  // 0 = background, 1..count in raster order
  std::uint32_t count = 0;
};

Components ConnectedComponents(const MaskGrid& binary,
                               Connectivity connectivity);

// Outer chain first, then one chain per hole (holes ordered by their first
// pixel in raster order). Throws ValidationError if the label is absent.
std::vector<BoundaryChain> TraceBoundary(
    const LabelGrid& labels, std::uint32_t id,
    Connectivity connectivity = Connectivity::kEight);

// 3x3 non-maximum suppression (ties resolved toward the lower raster index),
// score threshold (strict), then the top_k highest scores. Each survivor is
// placed at its pixel center plus offset.
VertexSet ExtractVertices(const Grid<float>& heatmap,
                          const Grid<float>& offsets, int top_k,
                          double vertex_threshold);

// Snaps a chain onto the vertex set; every output vertex is an element of
// `vertices`. Returns nullopt when fewer than 3 vertices survive, which asks
// the caller for a fallback.
std::optional<Ring> MavAttractSimplify(const BoundaryChain& chain,
                                       const VertexSet& vertices,
                                       double attract_dist,
                                       double merge_angle);

// Closed-ring Douglas-Peucker over pixel centers. Output vertices are a
// subsequence of the input; nullopt when fewer than 3 remain.
std::optional<Ring> DouglasPeucker(const BoundaryChain& chain,
                                   double tolerance);
std::optional<Ring> DouglasPeucker(std::span<const Point2> closed_points,
                                   double tolerance);

struct PolygonizeResult {
  InstanceSet instances;
  // Component label each instance came from.
  std::vector<std::uint32_t> source_labels;
  int dropped_components = 0;
  int dropped_holes = 0;
  int fallback_rings = 0;
};

// Instance score is the mean soft-mask value over the component's pixels.
// Output is ordered by component label for any worker count.
PolygonizeResult PolygonizePipeline(const SoftMaskGrid& soft_mask,
                                    const Grid<float>& heatmap,
                                    const Grid<float>& offsets,
                                    const PolygonizeConfig& config);

// Multiplies every coordinate by s (s > 0).
InstanceSet RescalePolygons(const InstanceSet& instances, double s);

// Thresholded components as scored instance masks, upsampled by the
// (integral) config.scale so they live at the output resolution.
struct MaskInstances {
  std::vector<InstanceMask> masks;
  std::vector<double> scores;
};

MaskInstances ExtractMaskInstances(const SoftMaskGrid& soft_mask,
                                   const PolygonizeConfig& config);

}  // namespace polyform

#endif  // POLYFORM_POLYGONIZE_H_
