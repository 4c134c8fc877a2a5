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

#include "polyform/raster.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "counter_rng.h"
#include "polyform/error.h"
#include "polyform/parallel.h"

namespace polyform {

// -----------------------------------------------------------------------------
// InstanceMask
// -----------------------------------------------------------------------------

InstanceMask::InstanceMask(int image_height, int image_width, int row0,
                           int col0, int rows, int cols)
    : image_height_(image_height),
      image_width_(image_width),
      row0_(row0),
      col0_(col0),
      rows_(std::max(0, rows)),
      cols_(std::max(0, cols)),
      bits_(static_cast<std::size_t>(rows_) * cols_, 0) {}

bool InstanceMask::Test(int r, int c) const {
  const int lr = r - row0_;
  const int lc = c - col0_;
  if (lr < 0 || lc < 0 || lr >= rows_ || lc >= cols_) return false;
  return bits_[static_cast<std::size_t>(lr) * cols_ + lc] != 0;
}

void InstanceMask::Set(int r, int c) {
  auto& bit = bits_[static_cast<std::size_t>(r - row0_) * cols_ + (c - col0_)];
  if (!bit) {
    bit = 1;
    ++area_;
  }
}

void InstanceMask::PaintInto(MaskGrid& mask) const {
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (bits_[static_cast<std::size_t>(r) * cols_ + c]) {
        mask.at(row0_ + r, col0_ + c) = 1;
      }
    }
  }
}

InstanceMask RasterizeInstance(const Polygon& poly, int height, int width) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Point2& p : poly.outer().vertices()) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  // Pixel centers r + 0.5 within [min_y, max_y].
  const int r0 = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
  const int r1 = std::min(height - 1, static_cast<int>(std::floor(max_y - 0.5)));
  const int c0 = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
  const int c1 = std::min(width - 1, static_cast<int>(std::floor(max_x - 0.5)));
  if (r1 < r0 || c1 < c0) return InstanceMask(height, width, 0, 0, 0, 0);

  InstanceMask mask(height, width, r0, c0, r1 - r0 + 1, c1 - c0 + 1);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (PointInPolygon({c + 0.5, r + 0.5}, poly)) mask.Set(r, c);
    }
  }
  return mask;
}

std::vector<InstanceMask> InstanceMasksFromLabels(const LabelGrid& labels,
                                                  std::uint32_t count) {
  struct Box {
    int r0 = std::numeric_limits<int>::max(), c0 = r0, r1 = -1, c1 = -1;
  };
  std::vector<Box> boxes(count + 1);
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const std::uint32_t l = labels.at(r, c);
      if (l == 0 || l > count) continue;
      Box& b = boxes[l];
      b.r0 = std::min(b.r0, r);
      b.c0 = std::min(b.c0, c);
      b.r1 = std::max(b.r1, r);
      b.c1 = std::max(b.c1, c);
    }
  }
  std::vector<InstanceMask> masks;
  masks.reserve(count);
  for (std::uint32_t l = 1; l <= count; ++l) {
    const Box& b = boxes[l];
    if (b.r1 < 0) {
      masks.emplace_back(labels.height(), labels.width(), 0, 0, 0, 0);
      continue;
    }
    InstanceMask m(labels.height(), labels.width(), b.r0, b.c0,
                   b.r1 - b.r0 + 1, b.c1 - b.c0 + 1);
    for (int r = b.r0; r <= b.r1; ++r) {
      for (int c = b.c0; c <= b.c1; ++c) {
        if (labels.at(r, c) == l) m.Set(r, c);
      }
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

double InstanceIoU(const InstanceMask& a, const InstanceMask& b) {
  std::int64_t inter = 0;
  const int r0 = std::max(a.row0(), b.row0());
  const int r1 = std::min(a.row0() + a.rows(), b.row0() + b.rows());
  const int c0 = std::max(a.col0(), b.col0());
  const int c1 = std::min(a.col0() + a.cols(), b.col0() + b.cols());
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      if (a.Test(r, c) && b.Test(r, c)) ++inter;
    }
  }
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MaskGrid RasterizeMask(const InstanceSet& instances, int height, int width) {
  if (height < 1 || width < 1) {
    throw ValidationError("mask size must be at least 1x1");
  }
  MaskGrid mask(height, width, 1, 0);
  for (const Instance& inst : instances) {
    RasterizeInstance(inst.polygon, height, width).PaintInto(mask);
  }
  return mask;
}

// -----------------------------------------------------------------------------
// Attraction field
// -----------------------------------------------------------------------------

AfmGrid EncodeAfm(const InstanceSet& instances, int height, int width,
                  int workers) {
  std::vector<LineSegment> segments;
  for (const Instance& inst : instances) {
    const auto edges = inst.polygon.Edges();
    segments.insert(segments.end(), edges.begin(), edges.end());
  }
  if (segments.empty()) throw GeometryError("no segments");

  AfmGrid afm(height, width, 2, 0.0);
  ParallelFor(static_cast<std::size_t>(height), workers, [&](std::size_t row) {
    const int r = static_cast<int>(row);
    for (int c = 0; c < width; ++c) {
      const Point2 x{c + 0.5, r + 0.5};
      const NearestSegment near = FindNearestSegment(x, segments);
      afm.at(r, c, 0) = near.foot.x - x.x;
      afm.at(r, c, 1) = near.foot.y - x.y;
    }
  });
  return afm;
}

// -----------------------------------------------------------------------------
// Vertices
// -----------------------------------------------------------------------------

VertexGrids EncodeVertices(const InstanceSet& instances, int height,
                           int width) {
  VertexGrids out{Grid<float>(height, width, 1, 0.0f),
                  Grid<float>(height, width, 2, 0.0f), 0};

  std::vector<std::size_t> offending;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const Point2& v : instances[i].polygon.Vertices()) {
      if (!(v.x >= 0.0 && v.x < width && v.y >= 0.0 && v.y < height)) {
        offending.push_back(i);
        break;
      }
    }
  }
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "vertex outside [0," << width << ")x[0," << height
        << ") in instance(s)";
    for (std::size_t i : offending) msg << ' ' << i;
    throw ValidationError(msg.str());
  }

  // Largest float strictly below 0.5; keeps rounded offsets in [-0.5, 0.5).
  const float kBelowHalf = std::nextafter(0.5f, 0.0f);
  for (const Instance& inst : instances) {
    for (const Point2& v : inst.polygon.Vertices()) {
      const int c = static_cast<int>(std::floor(v.x));
      const int r = static_cast<int>(std::floor(v.y));
      if (out.heatmap.at(r, c) == 1.0f) ++out.collisions;
      out.heatmap.at(r, c) = 1.0f;
      out.offsets.at(r, c, 0) =
          std::min(static_cast<float>(v.x - (c + 0.5)), kBelowHalf);
      out.offsets.at(r, c, 1) =
          std::min(static_cast<float>(v.y - (r + 0.5)), kBelowHalf);
    }
  }
  return out;
}

std::vector<Point2> DecodeVertices(const VertexGrids& grids, float threshold) {
  std::vector<Point2> out;
  for (int r = 0; r < grids.heatmap.height(); ++r) {
    for (int c = 0; c < grids.heatmap.width(); ++c) {
      if (grids.heatmap.at(r, c) >= threshold) {
        out.push_back({c + 0.5 + grids.offsets.at(r, c, 0),
                       r + 0.5 + grids.offsets.at(r, c, 1)});
      }
    }
  }
  return out;
}

// -----------------------------------------------------------------------------
// Morphology and degradation
// -----------------------------------------------------------------------------

namespace {

// Separable square max (dilate) or min (erode) filter with zero padding.
MaskGrid SquareFilter(const MaskGrid& mask, int radius, bool take_max) {
  if (radius < 0) throw ValidationError("radius must be >= 0");
  if (radius == 0) return mask;
  const int h = mask.height();
  const int w = mask.width();
  auto pick = [take_max](std::uint8_t a, std::uint8_t b) {
    return take_max ? std::max(a, b) : std::min(a, b);
  };
  MaskGrid rows(h, w, 1, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::uint8_t v = take_max ? 0 : 1;
      for (int k = c - radius; k <= c + radius; ++k) {
        v = pick(v, (k >= 0 && k < w) ? mask.at(r, k) : std::uint8_t{0});
      }
      rows.at(r, c) = v;
    }
  }
  MaskGrid out(h, w, 1, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::uint8_t v = take_max ? 0 : 1;
      for (int k = r - radius; k <= r + radius; ++k) {
        v = pick(v, (k >= 0 && k < h) ? rows.at(k, c) : std::uint8_t{0});
      }
      out.at(r, c) = v;
    }
  }
  return out;
}

enum Stream : std::uint64_t {
  kJitterStream = 1,
  kDropoutStream = 2,
  kSpuriousStream = 3,
  kNoiseStream = 4,
};

}  // namespace

MaskGrid DilateSquare(const MaskGrid& mask, int radius) {
  return SquareFilter(mask, radius, true);
}

MaskGrid ErodeSquare(const MaskGrid& mask, int radius) {
  return SquareFilter(mask, radius, false);
}

void ValidateDegradeSpec(const DegradeSpec& spec) {
  if (spec.dilate_radius < 0) throw ValidationError("dilate_radius < 0");
  if (spec.erode_radius < 0) throw ValidationError("erode_radius < 0");
  if (!(spec.boundary_jitter_sigma >= 0.0)) {
    throw ValidationError("boundary_jitter_sigma < 0");
  }
  if (!(spec.heatmap_noise_sigma >= 0.0)) {
    throw ValidationError("heatmap_noise_sigma < 0");
  }
  if (!(spec.vertex_dropout_prob >= 0.0 && spec.vertex_dropout_prob <= 1.0)) {
    throw ValidationError("vertex_dropout_prob outside [0, 1]");
  }
  if (spec.spurious_vertex_count < 0) {
    throw ValidationError("spurious_vertex_count < 0");
  }
}

DegradedTargets Degrade(const MaskGrid& mask, const VertexGrids& vertices,
                        const DegradeSpec& spec) {
  ValidateDegradeSpec(spec);
  if (!mask.SameExtent(vertices.heatmap) ||
      !mask.SameExtent(vertices.offsets)) {
    throw ValidationError("mask and vertex grids differ in size");
  }
  const int h = mask.height();
  const int w = mask.width();

  MaskGrid shaped = DilateSquare(mask, spec.dilate_radius);
  shaped = ErodeSquare(shaped, spec.erode_radius);

  if (spec.boundary_jitter_sigma > 0.0) {
    const internal::CounterRng rng(spec.rng_seed, kJitterStream);
    MaskGrid jittered(h, w, 1, 0);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::uint64_t k = static_cast<std::uint64_t>(r) * w + c;
        const double dx = spec.boundary_jitter_sigma * rng.Normal(2 * k);
        const double dy = spec.boundary_jitter_sigma * rng.Normal(2 * k + 1);
        const int sr = r + static_cast<int>(std::lround(dy));
        const int sc = c + static_cast<int>(std::lround(dx));
        jittered.at(r, c) = shaped.Contains(sr, sc) ? shaped.at(sr, sc) : 0;
      }
    }
    shaped = std::move(jittered);
  }

  DegradedTargets out{ConvertGrid<float>(shaped), vertices};
  Grid<float>& heat = out.vertices.heatmap;
  Grid<float>& off = out.vertices.offsets;

  if (spec.vertex_dropout_prob > 0.0) {
    const internal::CounterRng rng(spec.rng_seed, kDropoutStream);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (heat.at(r, c) <= 0.0f) continue;
        const std::uint64_t k = static_cast<std::uint64_t>(r) * w + c;
        if (rng.Uniform(k) < spec.vertex_dropout_prob) {
          heat.at(r, c) = 0.0f;
          off.at(r, c, 0) = 0.0f;
          off.at(r, c, 1) = 0.0f;
        }
      }
    }
  }

  if (spec.spurious_vertex_count > 0 && h > 0 && w > 0) {
    const internal::CounterRng rng(spec.rng_seed, kSpuriousStream);
    const std::uint64_t n = static_cast<std::uint64_t>(h) * w;
    for (int i = 0; i < spec.spurious_vertex_count; ++i) {
      const std::uint64_t base = static_cast<std::uint64_t>(i) * 4;
      const std::uint64_t pixel = rng.Bits(base) % n;
      const int r = static_cast<int>(pixel / w);
      const int c = static_cast<int>(pixel % w);
      heat.at(r, c) = static_cast<float>(0.5 + 0.5 * rng.Uniform(base + 1));
      off.at(r, c, 0) = static_cast<float>(rng.Uniform(base + 2) - 0.5);
      off.at(r, c, 1) = static_cast<float>(rng.Uniform(base + 3) - 0.5);
    }
  }

  if (spec.heatmap_noise_sigma > 0.0) {
    const internal::CounterRng rng(spec.rng_seed, kNoiseStream);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::uint64_t k = static_cast<std::uint64_t>(r) * w + c;
        const double v = heat.at(r, c) + spec.heatmap_noise_sigma * rng.Normal(k);
        heat.at(r, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

InstanceSet DownscaleTargets(const InstanceSet& instances, double s) {
  if (!(s >= 1.0)) throw ValidationError("down-sampling factor must be >= 1");
  InstanceSet out;
  out.reserve(instances.size());
  for (const Instance& inst : instances) {
    out.push_back({MapVertices(inst.polygon,
                               [s](Point2 p) { return Point2{p.x / s, p.y / s}; }),
                   inst.score});
  }
  return out;
}

}  // namespace polyform
