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

// Polygon and mask quality measures: mask IoU, Boundary IoU, PoLiS, C-IoU,
// COCO-style AP/AR and vertex F1, plus a corpus-level evaluator.

#ifndef POLYFORM_METRICS_H_
#define POLYFORM_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polyform/geometry.h"
#include "polyform/grid.h"
#include "polyform/instance.h"
#include "polyform/raster.h"

namespace polyform {

// |a & b| / |a | b|, 1 when both are empty. Throws ValidationError when the
// shapes differ.
double IoUMask(const MaskGrid& a, const MaskGrid& b);

// Band width in pixels: max(1, round(d_frac * image diagonal)).
int BoundaryBandWidth(int height, int width, double d_frac);

// Mask pixels within Chebyshev distance `band` of the background (pixels
// outside the image count as background).
MaskGrid InnerBoundaryBand(const MaskGrid& mask, int band);
InstanceMask InnerBoundaryBand(const InstanceMask& mask, int band);

double BoundaryIoU(const MaskGrid& a, const MaskGrid& b, double d_frac = 0.02);

// Mean vertex-to-boundary distance in both directions, with exact
// point-to-segment minima. Hole rings contribute vertices and edges.
// Throws GeometryError for a zero-area polygon.
double Polis(const Polygon& a, const Polygon& b);

// IoU of the union masks, discounted by the relative difference of the
// total vertex counts. Throws ValidationError when either side has fewer
// than 3 vertices.
double CIoU(const InstanceSet& a, const InstanceSet& b, int height, int width);

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;  // in matching order
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;
};

// Greedy one-to-one matching: predictions in descending score order each
// take the unmatched ground truth of highest IoU (lowest index on ties) if
// that IoU is >= iou_thr. ious[p][g].
MatchResult MatchByIoU(std::span<const double> pred_scores,
                       const std::vector<std::vector<double>>& ious,
                       double iou_thr);

// Rasterizes both sets at height x width and matches them.
MatchResult MatchInstances(const InstanceSet& preds, const InstanceSet& gts,
                           double iou_thr, int height, int width);

enum class IouMode { kMask, kBoundary };

// Instances of one tile already rasterized at the tile's resolution.
struct EvalTile {
  int height = 0;
  int width = 0;
  std::vector<InstanceMask> preds;
  std::vector<double> pred_scores;
  std::vector<InstanceMask> gts;
};

EvalTile MakeEvalTile(const InstanceSet& preds, const InstanceSet& gts,
                      int height, int width);

struct ApAr {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ar = 0.0;
  double ar50 = 0.0;
  double ar75 = 0.0;
};

// IoU thresholds 0.50:0.05:0.95 and recall thresholds 0:0.01:1, computed
// the way the COCO reference evaluator does.
std::vector<double> CocoIouThresholds();
std::vector<double> CocoRecallThresholds();

// COCO protocol: per tile, per threshold, score-ranked greedy matching
// (at most max_dets predictions per tile); precision envelope sampled at
// 101 recall points; means over the 10 IoU thresholds. Fields are -1 when
// there is no ground truth at all. Tiles are accumulated in the given
// order.
ApAr CocoApAr(std::span<const EvalTile> tiles, IouMode mode,
              double boundary_d_frac = 0.02, int max_dets = 100,
              int workers = 1);

struct VertexMatchCounts {
  std::size_t matches = 0;
  std::size_t preds = 0;
  std::size_t gts = 0;

  double F1() const;
};

// Greedy one-to-one matching by ascending distance; a pair matches iff its
// distance is <= dist_thr.
VertexMatchCounts MatchVertices(std::span<const Point2> pred,
                                std::span<const Point2> gt, double dist_thr);
double VertexF1(std::span<const Point2> pred, std::span<const Point2> gt,
                double dist_thr);

struct EvalConfig {
  double iou_thr = 0.5;           // PoLiS pairing threshold
  double boundary_d_frac = 0.02;  // Boundary IoU band fraction
  double vertex_dist = 5.0;       // vertex F1 threshold, pixels
  int max_dets = 100;
  int workers = 1;
};

struct EvalReport {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  double ar = 0.0;
  double ar50 = 0.0;
  double ar75 = 0.0;
  double ap_boundary = 0.0;
  double polis_mean = 0.0;
  double ciou = 0.0;
  double iou = 0.0;
  double vertex_f1 = 0.0;

  std::size_t tiles = 0;
  std::size_t gt_instances = 0;
  std::size_t pred_instances = 0;
  std::size_t polis_pairs = 0;
  double polis_match_rate = 0.0;  // polis_pairs / gt_instances
};

// Evaluates predictions against ground truth. Both sides must list the same
// tile IDs; the error message lists missing and unexpected IDs. Tile sizes
// come from the ground truth. Results do not depend on tile order.
//
// Aggregation: iou pools intersections and unions over all tiles; ciou is
// the mean per-tile C-IoU of the union masks (tiles empty on both sides are
// skipped); polis_mean averages over pairs matched at iou_thr; vertex_f1
// pools matches over all tiles.
EvalReport EvaluateCorpus(std::span<const TileRecord> preds,
                          std::span<const TileRecord> gts,
                          const EvalConfig& config = {});

}  // namespace polyform

#endif  // POLYFORM_METRICS_H_
