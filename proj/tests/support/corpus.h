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

// Deterministic fixtures shared by the unit and acceptance tests.

#ifndef POLYFORM_TESTS_SUPPORT_CORPUS_H_
#define POLYFORM_TESTS_SUPPORT_CORPUS_H_

#include <cstdint>
#include <vector>

#include "polyform/geometry.h"
#include "polyform/instance.h"

namespace polyform::testing {

// Sequential wrapper around the library's counter-based generator.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t Bits();
  double Uniform();                  // [0, 1)
  double Uniform(double lo, double hi);
  int UniformInt(int lo, int hi);    // inclusive
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1] with up to four rectangular
// corner notches. Integer corners, every edge at least `min_edge` long,
// 4 + 2 * notches vertices. Requires x1 - x0 and y1 - y0 >= 3 * min_edge.
Polygon RandomRectilinearPolygon(TestRng& rng, int x0, int y0, int x1, int y1,
                                 int min_edge = 4);

struct CorpusOptions {
  int tiles = 200;
  int tile_size = 512;
  int max_polygons = 6;
  int min_side = 12;
  int max_side = 120;
  int gap = 6;     // minimum spacing between bounding boxes
  int margin = 2;  // minimum distance to the tile border
};

// Tiles "tile_000", "tile_001", ...; every tile holds at least one polygon.
std::vector<TileRecord> RectilinearCorpus(std::uint64_t seed,
                                          const CorpusOptions& options = {});

Polygon Rectangle(double x0, double y0, double x1, double y1);

// Square [x0, x0 + outer] x [y0, y0 + outer] with a centered square hole
// leaving walls of thickness `wall`.
Polygon SquareAnnulus(int x0, int y0, int outer, int wall);

// Simple star-shaped polygon around `center`.
Polygon RandomStarPolygon(TestRng& rng, Point2 center, int min_vertices,
                          int max_vertices, double min_radius,
                          double max_radius);

}  // namespace polyform::testing

#endif  // POLYFORM_TESTS_SUPPORT_CORPUS_H_
