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

// Encoders from polygon sets to the supervision rasters used for learning
// and polygonization: the instance mask, the attraction field map (AFM) and
// the vertex heatmap with sub-pixel offsets. Pixel (r, c) is sampled at its
// center (c + 0.5, r + 0.5).

#ifndef POLYFORM_RASTER_H_
#define POLYFORM_RASTER_H_

#include <cstdint>
#include <vector>

#include "polyform/geometry.h"
#include "polyform/grid.h"
#include "polyform/instance.h"

namespace polyform {

// Two channels (dx, dy) per pixel: displacement from the pixel center to its
// projection on the nearest boundary segment. Kept in double precision in
// memory; narrowed to f32 only when serialized.
using AfmGrid = Grid<double>;

struct VertexGrids {
  Grid<float> heatmap;  // 1 channel, [0, 1]
  Grid<float> offsets;  // 2 channels (dx, dy), [-0.5, 0.5)
  // Vertices that landed on an already occupied pixel (last one wins).
  int collisions = 0;
};

// Pixel-exact raster of one instance, clipped to an image of the given size
// and stored over its bounding box only.
class InstanceMask {
 public:
  InstanceMask() = default;
  InstanceMask(int image_height, int image_width, int row0, int col0,
               int rows, int cols);

  int image_height() const { return image_height_; }
  int image_width() const { return image_width_; }
  int row0() const { return row0_; }
  int col0() const { return col0_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t area() const { return area_; }

  // Image coordinates; false outside the bounding box.
  bool Test(int r, int c) const;
  void Set(int r, int c);

  // Adds this instance to a full-size mask.
  void PaintInto(MaskGrid& mask) const;

 private:
  int image_height_ = 0;
  int image_width_ = 0;
  int row0_ = 0;
  int col0_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::int64_t area_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Pixels whose center lies in the polygon (boundary inclusive).
InstanceMask RasterizeInstance(const Polygon& poly, int height, int width);

// Per-instance masks from a labeled component image: one InstanceMask per
// label 1..count.
std::vector<InstanceMask> InstanceMasksFromLabels(const LabelGrid& labels,
                                                  std::uint32_t count);

// Intersection over union; two empty masks give 1.
double InstanceIoU(const InstanceMask& a, const InstanceMask& b);

// 1 where a pixel center lies in any instance.
MaskGrid RasterizeMask(const InstanceSet& instances, int height, int width);

// Throws GeometryError("no segments") when there is nothing to attract to.
AfmGrid EncodeAfm(const InstanceSet& instances, int height, int width,
                  int workers = 1);

// Every vertex of every ring becomes a heatmap peak at pixel
// (floor(y), floor(x)) with the center-relative offset. Throws
// ValidationError naming the instance when a vertex is outside
// [0, width) x [0, height).
VertexGrids EncodeVertices(const InstanceSet& instances, int height,
                           int width);

// Inverse of EncodeVertices over pixels with heatmap >= threshold, in raster
// order.
std::vector<Point2> DecodeVertices(const VertexGrids& grids,
                                   float threshold = 1.0f);

struct DegradeSpec {
  int dilate_radius = 0;
  int erode_radius = 0;
  double boundary_jitter_sigma = 0.0;
  double heatmap_noise_sigma = 0.0;
  double vertex_dropout_prob = 0.0;
  int spurious_vertex_count = 0;
  std::uint64_t rng_seed = 0;
};

// Throws ValidationError on negative fields or a probability outside [0, 1].
void ValidateDegradeSpec(const DegradeSpec& spec);

struct DegradedTargets {
  SoftMaskGrid mask;
  VertexGrids vertices;
};

// Emulates an imperfect network output. Steps, in order: square dilation,
// square erosion, Gaussian boundary jitter (each pixel resamples the mask at
// a normally displaced location), vertex dropout, spurious vertex
// injection, additive heatmap noise clamped to [0, 1]. Fully determined by
// spec.rng_seed.
DegradedTargets Degrade(const MaskGrid& mask, const VertexGrids& vertices,
                        const DegradeSpec& spec);

// Square structuring element of side 2r + 1; pixels outside the image are
// background.
MaskGrid DilateSquare(const MaskGrid& mask, int radius);
MaskGrid ErodeSquare(const MaskGrid& mask, int radius);

// Divides every coordinate by s (s >= 1).
InstanceSet DownscaleTargets(const InstanceSet& instances, double s);

}  // namespace polyform

#endif  // POLYFORM_RASTER_H_
