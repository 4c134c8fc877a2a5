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

#include "polyform/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "polyform/error.h"
#include "polyform/parallel.h"

namespace polyform {

double IoUMask(const MaskGrid& a, const MaskGrid& b) {
  if (!a.SameShape(b)) throw ValidationError("mask shapes differ");
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const bool x = da[i] != 0;
    const bool y = db[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// -----------------------------------------------------------------------------
// Boundary IoU
// -----------------------------------------------------------------------------

int BoundaryBandWidth(int height, int width, double d_frac) {
  if (!(d_frac > 0.0)) throw ValidationError("boundary fraction must be > 0");
  const double diag = std::sqrt(static_cast<double>(height) * height +
                                static_cast<double>(width) * width);
  return std::max(1, static_cast<int>(std::lround(d_frac * diag)));
}

MaskGrid InnerBoundaryBand(const MaskGrid& mask, int band) {
  const MaskGrid eroded = ErodeSquare(mask, band);
  MaskGrid out(mask.height(), mask.width(), 1, 0);
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      out.at(r, c) = (mask.at(r, c) && !eroded.at(r, c)) ? 1 : 0;
    }
  }
  return out;
}

InstanceMask InnerBoundaryBand(const InstanceMask& mask, int band) {
  // Erosion only looks inside the mask, so the bounding box suffices.
  MaskGrid local(mask.rows(), mask.cols(), 1, 0);
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      local.at(r, c) = mask.Test(mask.row0() + r, mask.col0() + c) ? 1 : 0;
    }
  }
  const MaskGrid ring = InnerBoundaryBand(local, band);
  InstanceMask out(mask.image_height(), mask.image_width(), mask.row0(),
                   mask.col0(), mask.rows(), mask.cols());
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (ring.at(r, c)) out.Set(mask.row0() + r, mask.col0() + c);
    }
  }
  return out;
}

double BoundaryIoU(const MaskGrid& a, const MaskGrid& b, double d_frac) {
  if (!a.SameShape(b)) throw ValidationError("mask shapes differ");
  const int band = BoundaryBandWidth(a.height(), a.width(), d_frac);
  return IoUMask(InnerBoundaryBand(a, band), InnerBoundaryBand(b, band));
}

// -----------------------------------------------------------------------------
// PoLiS and C-IoU
// -----------------------------------------------------------------------------

namespace {

double MeanDistanceToBoundary(const std::vector<Point2>& points,
                              const std::vector<LineSegment>& boundary) {
  double sum = 0.0;
  for (const Point2& p : points) sum += FindNearestSegment(p, boundary).distance;
  return sum / static_cast<double>(points.size());
}

}  // namespace

double Polis(const Polygon& a, const Polygon& b) {
  if (Area(a) == 0.0 || Area(b) == 0.0) {
    throw GeometryError("PoLiS needs polygons with nonzero area");
  }
  return 0.5 * MeanDistanceToBoundary(a.Vertices(), b.Edges()) +
         0.5 * MeanDistanceToBoundary(b.Vertices(), a.Edges());
}

namespace {

std::size_t TotalVertices(const InstanceSet& set) {
  std::size_t n = 0;
  for (const Instance& inst : set) n += inst.polygon.VertexCount();
  return n;
}

double ComplexityFactor(std::size_t na, std::size_t nb) {
  const double diff = std::abs(static_cast<double>(na) - static_cast<double>(nb));
  return 1.0 - diff / static_cast<double>(na + nb);
}

}  // namespace

double CIoU(const InstanceSet& a, const InstanceSet& b, int height, int width) {
  const std::size_t na = TotalVertices(a);
  const std::size_t nb = TotalVertices(b);
  if (na < 3 || nb < 3) {
    throw ValidationError("C-IoU needs at least 3 vertices on each side");
  }
  const double iou = IoUMask(RasterizeMask(a, height, width),
                             RasterizeMask(b, height, width));
  return iou * ComplexityFactor(na, nb);
}

// -----------------------------------------------------------------------------
// Matching
// -----------------------------------------------------------------------------

namespace {

std::vector<std::size_t> ScoreOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return scores[x] > scores[y];
  });
  return order;
}

}  // namespace

MatchResult MatchByIoU(std::span<const double> pred_scores,
                       const std::vector<std::vector<double>>& ious,
                       double iou_thr) {
  const std::size_t num_gts = ious.empty() ? 0 : ious.front().size();
  std::vector<bool> gt_taken(num_gts, false);
  std::vector<bool> pred_taken(pred_scores.size(), false);
  MatchResult out;
  for (std::size_t p : ScoreOrder(pred_scores)) {
    std::size_t best = num_gts;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < num_gts; ++g) {
      if (gt_taken[g]) continue;
      if (ious[p][g] >= iou_thr && ious[p][g] > best_iou) {
        best = g;
        best_iou = ious[p][g];
      }
    }
    if (best < num_gts) {
      gt_taken[best] = true;
      pred_taken[p] = true;
      out.pairs.push_back({p, best, best_iou});
    }
  }
  for (std::size_t p = 0; p < pred_scores.size(); ++p) {
    if (!pred_taken[p]) out.unmatched_preds.push_back(p);
  }
  for (std::size_t g = 0; g < num_gts; ++g) {
    if (!gt_taken[g]) out.unmatched_gts.push_back(g);
  }
  return out;
}

namespace {

std::vector<std::vector<double>> IouMatrix(const std::vector<InstanceMask>& preds,
                                           const std::vector<InstanceMask>& gts) {
  std::vector<std::vector<double>> ious(preds.size(),
                                        std::vector<double>(gts.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      ious[p][g] = InstanceIoU(preds[p], gts[g]);
    }
  }
  return ious;
}

std::vector<InstanceMask> RasterizeAll(const InstanceSet& set, int height,
                                       int width) {
  std::vector<InstanceMask> out;
  out.reserve(set.size());
  for (const Instance& inst : set) {
    out.push_back(RasterizeInstance(inst.polygon, height, width));
  }
  return out;
}

std::vector<double> Scores(const InstanceSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const Instance& inst : set) out.push_back(inst.score);
  return out;
}

}  // namespace

MatchResult MatchInstances(const InstanceSet& preds, const InstanceSet& gts,
                           double iou_thr, int height, int width) {
  const auto ious = IouMatrix(RasterizeAll(preds, height, width),
                              RasterizeAll(gts, height, width));
  return MatchByIoU(Scores(preds), ious, iou_thr);
}

EvalTile MakeEvalTile(const InstanceSet& preds, const InstanceSet& gts,
                      int height, int width) {
  return {height, width, RasterizeAll(preds, height, width), Scores(preds),
          RasterizeAll(gts, height, width)};
}

// -----------------------------------------------------------------------------
// COCO AP / AR
// -----------------------------------------------------------------------------

std::vector<double> CocoIouThresholds() {
  // numpy.linspace(.5, .95, 10): start + i * step, exact endpoint.
  const double step = (0.95 - 0.5) / 9.0;
  std::vector<double> t(10);
  for (int i = 0; i < 9; ++i) t[i] = i * step + 0.5;
  t[9] = 0.95;
  return t;
}

std::vector<double> CocoRecallThresholds() {
  // numpy.linspace(0, 1, 101).
  const double step = 1.0 / 100.0;
  std::vector<double> r(101);
  for (int i = 0; i < 100; ++i) r[i] = i * step;
  r[100] = 1.0;
  return r;
}

namespace {

struct TileDetections {
  std::vector<double> scores;                  // score-sorted, truncated
  std::vector<std::vector<bool>> matched;      // [threshold][detection]
  std::size_t num_gts = 0;
};

TileDetections EvaluateTile(const EvalTile& tile, IouMode mode,
                            double boundary_d_frac, int max_dets,
                            const std::vector<double>& thresholds) {
  std::vector<std::size_t> order = ScoreOrder(tile.pred_scores);
  if (order.size() > static_cast<std::size_t>(max_dets)) {
    order.resize(static_cast<std::size_t>(max_dets));
  }
  std::vector<InstanceMask> preds;
  preds.reserve(order.size());
  TileDetections out;
  for (std::size_t p : order) {
    preds.push_back(tile.preds[p]);
    out.scores.push_back(tile.pred_scores[p]);
  }
  std::vector<InstanceMask> gts = tile.gts;
  out.num_gts = gts.size();
  if (mode == IouMode::kBoundary) {
    const int band = BoundaryBandWidth(tile.height, tile.width, boundary_d_frac);
    for (auto& m : preds) m = InnerBoundaryBand(m, band);
    for (auto& m : gts) m = InnerBoundaryBand(m, band);
  }
  const auto ious = IouMatrix(preds, gts);

  for (double t : thresholds) {
    std::vector<bool> gt_taken(gts.size(), false);
    std::vector<bool> matched(preds.size(), false);
    for (std::size_t d = 0; d < preds.size(); ++d) {
      // Mirrors the reference evaluator, including its tie rule: a later
      // ground truth with equal IoU replaces an earlier candidate.
      double best = std::min(t, 1.0 - 1e-10);
      std::ptrdiff_t m = -1;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gt_taken[g]) continue;
        if (ious[d][g] < best) continue;
        best = ious[d][g];
        m = static_cast<std::ptrdiff_t>(g);
      }
      if (m >= 0) {
        gt_taken[static_cast<std::size_t>(m)] = true;
        matched[d] = true;
      }
    }
    out.matched.push_back(std::move(matched));
  }
  return out;
}

}  // namespace

ApAr CocoApAr(std::span<const EvalTile> tiles, IouMode mode,
              double boundary_d_frac, int max_dets, int workers) {
  if (max_dets < 1) throw ValidationError("max_dets must be >= 1");
  const auto thresholds = CocoIouThresholds();
  const auto recall_thresholds = CocoRecallThresholds();

  std::vector<TileDetections> per_tile(tiles.size());
  ParallelFor(tiles.size(), workers, [&](std::size_t i) {
    per_tile[i] = EvaluateTile(tiles[i], mode, boundary_d_frac, max_dets,
                               thresholds);
  });

  std::vector<double> scores;
  std::size_t num_gts = 0;
  for (const auto& t : per_tile) {
    scores.insert(scores.end(), t.scores.begin(), t.scores.end());
    num_gts += t.num_gts;
  }
  if (num_gts == 0) return {-1.0, -1.0, -1.0, -1.0, -1.0, -1.0};
  const std::vector<std::size_t> order = ScoreOrder(scores);
  const std::size_t nd = order.size();

  std::vector<double> precision(thresholds.size());
  std::vector<double> recall(thresholds.size());
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    std::vector<bool> tp_flat;
    tp_flat.reserve(nd);
    for (const auto& t : per_tile) {
      tp_flat.insert(tp_flat.end(), t.matched[ti].begin(), t.matched[ti].end());
    }
    std::vector<double> rc(nd);
    std::vector<double> pr(nd);
    double tp = 0.0;
    double fp = 0.0;
    for (std::size_t i = 0; i < nd; ++i) {
      (tp_flat[order[i]] ? tp : fp) += 1.0;
      rc[i] = tp / static_cast<double>(num_gts);
      pr[i] = tp / (fp + tp + std::numeric_limits<double>::epsilon());
    }
    recall[ti] = nd ? rc.back() : 0.0;
    for (std::size_t i = nd; i-- > 1;) {
      if (pr[i] > pr[i - 1]) pr[i - 1] = pr[i];
    }
    double q_sum = 0.0;
    for (double r : recall_thresholds) {
      const auto it = std::lower_bound(rc.begin(), rc.end(), r);
      const std::size_t pi = static_cast<std::size_t>(it - rc.begin());
      if (pi < nd) q_sum += pr[pi];
    }
    precision[ti] = q_sum / static_cast<double>(recall_thresholds.size());
  }

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  // Thresholds 0.5 and 0.75 sit at indices 0 and 5.
  return {mean(precision), precision[0], precision[5],
          mean(recall),    recall[0],    recall[5]};
}

// -----------------------------------------------------------------------------
// Vertex F1
// -----------------------------------------------------------------------------

double VertexMatchCounts::F1() const {
  if (preds == 0 && gts == 0) return 1.0;
  if (preds == 0 || gts == 0 || matches == 0) return 0.0;
  const double p = static_cast<double>(matches) / static_cast<double>(preds);
  const double r = static_cast<double>(matches) / static_cast<double>(gts);
  return 2.0 * p * r / (p + r);
}

VertexMatchCounts MatchVertices(std::span<const Point2> pred,
                                std::span<const Point2> gt, double dist_thr) {
  if (!(dist_thr > 0.0)) throw ValidationError("distance threshold must be > 0");
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      const double d = Distance(pred[i], gt[j]);
      if (d <= dist_thr) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  VertexMatchCounts out{0, pred.size(), gt.size()};
  for (const auto& [d, i, j] : candidates) {
    if (pred_used[i] || gt_used[j]) continue;
    pred_used[i] = gt_used[j] = true;
    ++out.matches;
  }
  return out;
}

double VertexF1(std::span<const Point2> pred, std::span<const Point2> gt,
                double dist_thr) {
  return MatchVertices(pred, gt, dist_thr).F1();
}

// -----------------------------------------------------------------------------
// Corpus evaluation
// -----------------------------------------------------------------------------

namespace {

std::vector<const TileRecord*> SortedById(std::span<const TileRecord> tiles,
                                          const char* side) {
  std::vector<const TileRecord*> out;
  out.reserve(tiles.size());
  for (const TileRecord& t : tiles) out.push_back(&t);
  std::sort(out.begin(), out.end(), [](const TileRecord* a, const TileRecord* b) {
    return a->tile_id < b->tile_id;
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i]->tile_id == out[i - 1]->tile_id) {
      throw ValidationError(std::string("duplicate ") + side + " tile ID '" +
                            out[i]->tile_id + "'");
    }
  }
  return out;
}

std::vector<Point2> AllVertices(const InstanceSet& set) {
  std::vector<Point2> out;
  for (const Instance& inst : set) {
    const auto v = inst.polygon.Vertices();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

struct TileStats {
  EvalTile eval;
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  bool has_ciou = false;
  double ciou = 0.0;
  std::vector<double> polis;
  VertexMatchCounts vertices;
};

}  // namespace

EvalReport EvaluateCorpus(std::span<const TileRecord> preds,
                          std::span<const TileRecord> gts,
                          const EvalConfig& config) {
  const auto gt_sorted = SortedById(gts, "ground-truth");
  const auto pred_sorted = SortedById(preds, "prediction");

  std::set<std::string> gt_ids;
  std::set<std::string> pred_ids;
  for (const auto* t : gt_sorted) gt_ids.insert(t->tile_id);
  for (const auto* t : pred_sorted) pred_ids.insert(t->tile_id);
  if (gt_ids != pred_ids) {
    std::ostringstream msg;
    msg << "tile IDs do not align;";
    for (const auto& id : gt_ids) {
      if (!pred_ids.count(id)) msg << " missing prediction tile '" << id << "';";
    }
    for (const auto& id : pred_ids) {
      if (!gt_ids.count(id)) msg << " unknown prediction tile '" << id << "';";
    }
    throw ValidationError(msg.str());
  }

  std::vector<TileStats> stats(gt_sorted.size());
  ParallelFor(gt_sorted.size(), config.workers, [&](std::size_t i) {
    const TileRecord& gt = *gt_sorted[i];
    const TileRecord& pred = *pred_sorted[i];
    TileStats& s = stats[i];
    s.eval = MakeEvalTile(pred.instances, gt.instances, gt.height, gt.width);

    MaskGrid gt_mask(gt.height, gt.width, 1, 0);
    MaskGrid pred_mask(gt.height, gt.width, 1, 0);
    for (const auto& m : s.eval.gts) m.PaintInto(gt_mask);
    for (const auto& m : s.eval.preds) m.PaintInto(pred_mask);
    for (std::size_t k = 0; k < gt_mask.data().size(); ++k) {
      const bool a = gt_mask.data()[k] != 0;
      const bool b = pred_mask.data()[k] != 0;
      s.inter += a && b;
      s.uni += a || b;
    }

    const std::size_t na = TotalVertices(pred.instances);
    const std::size_t nb = TotalVertices(gt.instances);
    if (na + nb > 0) {
      const double iou = s.uni == 0 ? 1.0
                                    : static_cast<double>(s.inter) /
                                          static_cast<double>(s.uni);
      s.has_ciou = true;
      s.ciou = iou * ComplexityFactor(na, nb);
    }

    const auto ious = IouMatrix(s.eval.preds, s.eval.gts);
    const MatchResult match = MatchByIoU(s.eval.pred_scores, ious, config.iou_thr);
    for (const MatchPair& pair : match.pairs) {
      s.polis.push_back(Polis(pred.instances[pair.pred].polygon,
                              gt.instances[pair.gt].polygon));
    }
    s.vertices = MatchVertices(AllVertices(pred.instances),
                               AllVertices(gt.instances), config.vertex_dist);
  });

  EvalReport report;
  std::vector<EvalTile> eval_tiles;
  eval_tiles.reserve(stats.size());
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  double ciou_sum = 0.0;
  std::size_t ciou_tiles = 0;
  double polis_sum = 0.0;
  VertexMatchCounts vertices;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    TileStats& s = stats[i];
    inter += s.inter;
    uni += s.uni;
    if (s.has_ciou) {
      ciou_sum += s.ciou;
      ++ciou_tiles;
    }
    for (double p : s.polis) polis_sum += p;
    report.polis_pairs += s.polis.size();
    vertices.matches += s.vertices.matches;
    vertices.preds += s.vertices.preds;
    vertices.gts += s.vertices.gts;
    report.gt_instances += s.eval.gts.size();
    report.pred_instances += s.eval.preds.size();
    eval_tiles.push_back(std::move(s.eval));
  }

  const ApAr mask = CocoApAr(eval_tiles, IouMode::kMask, config.boundary_d_frac,
                             config.max_dets, config.workers);
  const ApAr boundary = CocoApAr(eval_tiles, IouMode::kBoundary,
                                 config.boundary_d_frac, config.max_dets,
                                 config.workers);
  report.ap = mask.ap;
  report.ap50 = mask.ap50;
  report.ap75 = mask.ap75;
  report.ar = mask.ar;
  report.ar50 = mask.ar50;
  report.ar75 = mask.ar75;
  report.ap_boundary = boundary.ap;
  report.iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  report.ciou = ciou_tiles == 0 ? 1.0 : ciou_sum / static_cast<double>(ciou_tiles);
  report.polis_mean = report.polis_pairs == 0
                          ? 0.0
                          : polis_sum / static_cast<double>(report.polis_pairs);
  report.vertex_f1 = vertices.F1();
  report.tiles = stats.size();
  report.polis_match_rate =
      report.gt_instances == 0
          ? 0.0
          : static_cast<double>(report.polis_pairs) /
                static_cast<double>(report.gt_instances);
  return report;
}

}  // namespace polyform
