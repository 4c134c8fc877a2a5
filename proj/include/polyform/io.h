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

// File formats. All coordinates are pixels: x right, y down, origin at the
// top-left image corner. Every reader reports malformed input as a
// FormatError.
//
// RGF raster container, little-endian:
//   offset  0  char[4]  magic "RGF1"
//   offset  4  u32      height
//   offset  8  u32      width
//   offset 12  u32      channels
//   offset 16  u32      dtype (0 = u8, 1 = f32)
//   offset 20  payload  height * width * channels elements, row-major,
//                       channel-last

#ifndef POLYFORM_IO_H_
#define POLYFORM_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polyform/grid.h"
#include "polyform/instance.h"
#include "polyform/metrics.h"

namespace polyform {

inline constexpr std::size_t kRgfHeaderSize = 20;

std::vector<std::uint8_t> WriteRgf(const RasterGrid& grid);
RasterGrid ReadRgf(std::span<const std::uint8_t> bytes);

// --- GeoJSON ---------------------------------------------------------------

// A FeatureCollection of Polygon features, one per instance, with
// properties {tile_id, score}. Rings are written closed (first position
// repeated) and read back open. A top-level "tiles" member lists every
// tile with its size so empty tiles survive a round trip; "metadata" is
// copied verbatim when given.
std::string WriteGeoJson(std::span<const TileRecord> records,
                         const nlohmann::json& metadata = nullptr);

struct GeoJsonDocument {
  std::vector<TileRecord> records;
  // False for collections without a "tiles" member. Records are then
  // created in order of first appearance and have size 0 x 0.
  bool has_tile_index = false;
  nlohmann::json metadata;
};

GeoJsonDocument ReadGeoJson(std::string_view text);

// --- COCO ------------------------------------------------------------------

struct CocoDocument {
  std::vector<TileRecord> records;
  std::vector<std::string> warnings;
};

// Polygon-encoded segmentations only. Each flat [x1, y1, x2, y2, ...] array
// is one ring; the ring of largest area becomes the outer ring and the rest
// become holes. Tile IDs are the image file names (the numeric image id when
// the name is missing).
CocoDocument ReadCocoAnnotations(std::string_view text);
std::string WriteCocoAnnotations(std::span<const TileRecord> records);

// --- SVG -------------------------------------------------------------------

enum class SvgBackground { kNone, kChecker };

struct SvgStyle {
  SvgBackground background = SvgBackground::kNone;
  double stroke_width = 1.0;
  double fill_opacity = 0.4;
};

// Tiles are laid out left to right. Each instance is one path with
// even-odd fill; its color comes from a fixed palette indexed by the
// instance's position in the document.
std::string RenderSvg(std::span<const TileRecord> records,
                      const SvgStyle& style = {});

// --- Reports ---------------------------------------------------------------

nlohmann::json ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(const nlohmann::json& json);
// Two aligned columns: metric name and value.
std::string FormatReportTable(const EvalReport& report);

// --- Files -----------------------------------------------------------------

std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path);
void WriteBinaryFile(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes);
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Parses JSON, reporting failures as FormatError("json", ...) with the
// byte offset.
nlohmann::json ParseJson(std::string_view text);

}  // namespace polyform

#endif  // POLYFORM_IO_H_
