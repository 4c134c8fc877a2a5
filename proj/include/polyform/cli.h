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

// Batch front-end. Every subcommand reads and writes files relative to the
// working directory and reports failures as a JSON object on the error
// stream, e.g. {"error": "...", "tile_errors": [{"tile_id": ..., ...}]}.
//
//   encode      GeoJSON or COCO -> directory of RGF rasters + manifest.json
//   degrade     raster directory -> degraded raster directory
//   polygonize  raster directory -> GeoJSON
//   eval        prediction GeoJSON vs ground truth -> report JSON + table
//   roundtrip   ground truth -> encode, degrade, polygonize, compare
//   render      GeoJSON -> SVG

#ifndef POLYFORM_CLI_H_
#define POLYFORM_CLI_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyform/instance.h"
#include "polyform/metrics.h"
#include "polyform/polygonize.h"
#include "polyform/raster.h"

namespace polyform {

inline constexpr const char* kManifestName = "manifest.json";

// Rasterized targets of one tile at grid resolution.
struct TileRasters {
  MaskGrid mask;
  AfmGrid afm;  // empty when not requested
  VertexGrids vertices;
};

// Downscales the tile's polygons by `scale` and rasterizes them on a
// ceil(height / scale) x ceil(width / scale) grid. A tile without
// instances gets a zero AFM.
TileRasters EncodeTile(const TileRecord& tile, double scale,
                       bool with_afm = true);

// Per-tile degradation seed derived from the run seed.
std::uint64_t TileSeed(std::uint64_t seed, std::size_t tile_index);

// Loads GeoJSON or COCO annotations, chosen by content.
std::vector<TileRecord> LoadAnnotations(const std::filesystem::path& path,
                                        std::vector<std::string>* warnings =
                                            nullptr);

struct RoundtripOptions {
  double scale = 1.0;
  DegradeSpec degrade;
  PolygonizeConfig polygonize;
  EvalConfig eval;
  int workers = 1;  // tiles in flight
};

struct RoundtripReport {
  ApAr mask;              // thresholded masks as instances
  EvalReport polygon;     // polygons
  double ap_gap_points = 0.0;  // 100 * (mask.ap - polygon.ap)
  // Ground-truth instances matched at IoU 0.5 by a polygon with the same
  // vertex count, over all ground-truth instances.
  double vertex_count_match_rate = 0.0;
  int fallback_rings = 0;
  int dropped_components = 0;
  int dropped_holes = 0;
};

// Encode (without AFM), degrade, polygonize and evaluate both the
// thresholded masks and the polygons against `gts`. `polygons` receives
// the polygonized tiles when not null.
RoundtripReport RunRoundtrip(std::span<const TileRecord> gts,
                             const RoundtripOptions& options,
                             std::vector<TileRecord>* polygons = nullptr);

nlohmann::json RoundtripToJson(const RoundtripReport& report);

// Entry point used by the executable; returns the process exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace polyform

#endif  // POLYFORM_CLI_H_
