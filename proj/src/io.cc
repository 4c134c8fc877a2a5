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

#include "polyform/io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "polyform/error.h"

namespace polyform {

using nlohmann::json;

// -----------------------------------------------------------------------------
// RGF
// -----------------------------------------------------------------------------

namespace {

constexpr std::array<char, 4> kRgfMagic = {'R', 'G', 'F', '1'};

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

template <typename T>
void PutHeader(std::vector<std::uint8_t>& out, const Grid<T>& g, DType dtype) {
  out.insert(out.end(), kRgfMagic.begin(), kRgfMagic.end());
  PutU32(out, static_cast<std::uint32_t>(g.height()));
  PutU32(out, static_cast<std::uint32_t>(g.width()));
  PutU32(out, static_cast<std::uint32_t>(g.channels()));
  PutU32(out, static_cast<std::uint32_t>(dtype));
}

}  // namespace

std::vector<std::uint8_t> WriteRgf(const RasterGrid& grid) {
  std::vector<std::uint8_t> out;
  if (const auto* g = std::get_if<Grid<std::uint8_t>>(&grid)) {
    out.reserve(kRgfHeaderSize + g->data().size());
    PutHeader(out, *g, DType::kU8);
    out.insert(out.end(), g->data().begin(), g->data().end());
  } else {
    const auto& f = std::get<Grid<float>>(grid);
    out.reserve(kRgfHeaderSize + 4 * f.data().size());
    PutHeader(out, f, DType::kF32);
    for (float v : f.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

RasterGrid ReadRgf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("magic", "truncated header");
  if (!std::equal(kRgfMagic.begin(), kRgfMagic.end(), bytes.begin())) {
    throw FormatError("magic", "expected \"RGF1\"");
  }
  static constexpr std::array<const char*, 4> kFields = {"height", "width",
                                                         "channels", "dtype"};
  std::array<std::uint32_t, 4> header{};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t at = 4 + 4 * i;
    if (bytes.size() < at + 4) throw FormatError(kFields[i], "truncated header");
    header[i] = GetU32(bytes, at);
  }
  const auto [height, width, channels, dtype] = header;
  constexpr std::uint32_t kMaxDim = 1u << 20;
  if (height > kMaxDim) throw FormatError("height", "too large");
  if (width > kMaxDim) throw FormatError("width", "too large");
  if (channels == 0 || channels > 64) {
    throw FormatError("channels", "must be in [1, 64]");
  }
  if (dtype != static_cast<std::uint32_t>(DType::kU8) &&
      dtype != static_cast<std::uint32_t>(DType::kF32)) {
    throw FormatError("dtype", "unknown dtype " + std::to_string(dtype));
  }
  const std::uint64_t count =
      static_cast<std::uint64_t>(height) * width * channels;
  const std::uint64_t elem = dtype == 0 ? 1 : 4;
  const std::uint64_t expected = kRgfHeaderSize + count * elem;
  if (bytes.size() < expected) {
    throw FormatError("payload", "truncated: expected " +
                                     std::to_string(count * elem) + " bytes");
  }
  if (bytes.size() > expected) {
    throw FormatError("payload", "trailing bytes after payload");
  }
  const auto payload = bytes.subspan(kRgfHeaderSize);
  const int h = static_cast<int>(height);
  const int w = static_cast<int>(width);
  const int c = static_cast<int>(channels);
  if (dtype == 0) {
    return Grid<std::uint8_t>(h, w, c,
                              std::vector<std::uint8_t>(payload.begin(), payload.end()));
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(GetU32(payload, 4 * i));
  }
  return Grid<float>(h, w, c, std::move(values));
}

// -----------------------------------------------------------------------------
// JSON helpers
// -----------------------------------------------------------------------------

json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError("json", "parse error at byte " + std::to_string(e.byte) +
                                  ": " + e.what());
  }
}

namespace {

const json& Member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw FormatError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw FormatError(where, std::string("missing member \"") + key + "\"");
  }
  return *it;
}

double Number(const json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw FormatError(where, "number is not finite");
  return d;
}

int Dimension(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::int64_t>() > (1 << 20)) {
    throw FormatError(where, "expected a non-negative integer size");
  }
  return static_cast<int>(v.get<std::int64_t>());
}

std::string String(const json& v, const std::string& where) {
  if (!v.is_string()) throw FormatError(where, "expected a string");
  return v.get<std::string>();
}

Ring MakeRing(std::vector<Point2> pts, const std::string& where) {
  try {
    return Ring(std::move(pts));
  } catch (const GeometryError& e) {
    throw FormatError(where, e.what());
  }
}

json RingToGeoJson(const Ring& ring) {
  json coords = json::array();
  for (const Point2& p : ring.vertices()) coords.push_back({p.x, p.y});
  coords.push_back({ring[0].x, ring[0].y});
  return coords;
}

Ring RingFromGeoJson(const json& coords, const std::string& where) {
  if (!coords.is_array()) throw FormatError(where, "ring must be an array");
  if (coords.size() < 4) {
    throw FormatError(where, "ring needs at least 4 positions, got " +
                                 std::to_string(coords.size()));
  }
  std::vector<Point2> pts;
  pts.reserve(coords.size());
  for (const json& pos : coords) {
    if (!pos.is_array() || pos.size() < 2) {
      throw FormatError(where, "position must be [x, y]");
    }
    pts.push_back({Number(pos[0], where), Number(pos[1], where)});
  }
  if (pts.front() != pts.back()) throw FormatError(where, "unclosed ring");
  pts.pop_back();
  return MakeRing(std::move(pts), where);
}

}  // namespace

// -----------------------------------------------------------------------------
// GeoJSON
// -----------------------------------------------------------------------------

std::string WriteGeoJson(std::span<const TileRecord> records,
                         const json& metadata) {
  json tiles = json::array();
  json features = json::array();
  for (const TileRecord& rec : records) {
    tiles.push_back({{"tile_id", rec.tile_id},
                     {"height", rec.height},
                     {"width", rec.width}});
    for (const Instance& inst : rec.instances) {
      json rings = json::array();
      rings.push_back(RingToGeoJson(inst.polygon.outer()));
      for (const Ring& h : inst.polygon.holes()) rings.push_back(RingToGeoJson(h));
      features.push_back(
          {{"type", "Feature"},
           {"properties", {{"tile_id", rec.tile_id}, {"score", inst.score}}},
           {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}}});
    }
  }
  json doc = {{"type", "FeatureCollection"},
              {"tiles", std::move(tiles)},
              {"features", std::move(features)}};
  if (!metadata.is_null()) doc["metadata"] = metadata;
  return doc.dump(1) + "\n";
}

GeoJsonDocument ReadGeoJson(std::string_view text) {
  const json doc = ParseJson(text);
  if (String(Member(doc, "type", "type"), "type") != "FeatureCollection") {
    throw FormatError("type", "expected FeatureCollection");
  }
  GeoJsonDocument out;
  std::map<std::string, std::size_t> index;
  if (const auto it = doc.find("tiles"); it != doc.end()) {
    if (!it->is_array()) throw FormatError("tiles", "expected an array");
    out.has_tile_index = true;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "tiles[" + std::to_string(i) + "]";
      const json& t = (*it)[i];
      TileRecord rec;
      rec.tile_id = String(Member(t, "tile_id", where), where + ".tile_id");
      rec.height = Dimension(Member(t, "height", where), where + ".height");
      rec.width = Dimension(Member(t, "width", where), where + ".width");
      if (!index.emplace(rec.tile_id, out.records.size()).second) {
        throw FormatError(where, "duplicate tile_id '" + rec.tile_id + "'");
      }
      out.records.push_back(std::move(rec));
    }
  }
  if (const auto it = doc.find("metadata"); it != doc.end()) out.metadata = *it;

  const json& features = Member(doc, "features", "features");
  if (!features.is_array()) throw FormatError("features", "expected an array");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string where = "features[" + std::to_string(i) + "]";
    const json& f = features[i];
    const json& props = Member(f, "properties", where);
    const std::string tile_id =
        String(Member(props, "tile_id", where + ".properties"),
               where + ".properties.tile_id");
    double score = 1.0;
    if (props.contains("score")) {
      score = Number(props["score"], where + ".properties.score");
    }
    const json& geom = Member(f, "geometry", where);
    const std::string type = String(Member(geom, "type", where + ".geometry"),
                                    where + ".geometry.type");
    if (type != "Polygon") {
      throw FormatError(where + ".geometry.type",
                        "unsupported geometry type " + type);
    }
    const json& rings = Member(geom, "coordinates", where + ".geometry");
    if (!rings.is_array() || rings.empty()) {
      throw FormatError(where + ".geometry.coordinates",
                        "expected a non-empty array of rings");
    }
    Ring outer = RingFromGeoJson(rings[0], where + ".geometry.coordinates[0]");
    std::vector<Ring> holes;
    for (std::size_t k = 1; k < rings.size(); ++k) {
      holes.push_back(RingFromGeoJson(
          rings[k], where + ".geometry.coordinates[" + std::to_string(k) + "]"));
    }

    auto it = index.find(tile_id);
    if (it == index.end()) {
      if (out.has_tile_index) {
        throw FormatError(where + ".properties.tile_id",
                          "tile '" + tile_id + "' is not listed in \"tiles\"");
      }
      it = index.emplace(tile_id, out.records.size()).first;
      out.records.push_back({tile_id, 0, 0, {}});
    }
    out.records[it->second].instances.push_back(
        {Polygon(std::move(outer), std::move(holes)), score});
  }
  return out;
}

// -----------------------------------------------------------------------------
// COCO
// -----------------------------------------------------------------------------

CocoDocument ReadCocoAnnotations(std::string_view text) {
  const json doc = ParseJson(text);
  CocoDocument out;
  std::map<std::int64_t, std::size_t> by_image;

  const json& images = Member(doc, "images", "images");
  if (!images.is_array()) throw FormatError("images", "expected an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& img = images[i];
    const json& id = Member(img, "id", where);
    if (!id.is_number_integer()) throw FormatError(where + ".id", "expected an integer");
    TileRecord rec;
    rec.tile_id = img.contains("file_name")
                      ? String(img["file_name"], where + ".file_name")
                      : std::to_string(id.get<std::int64_t>());
    rec.height = Dimension(Member(img, "height", where), where + ".height");
    rec.width = Dimension(Member(img, "width", where), where + ".width");
    if (!by_image.emplace(id.get<std::int64_t>(), out.records.size()).second) {
      throw FormatError(where + ".id", "duplicate image id");
    }
    out.records.push_back(std::move(rec));
  }

  const json& anns = Member(doc, "annotations", "annotations");
  if (!anns.is_array()) throw FormatError("annotations", "expected an array");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const json& ann = anns[i];
    const json& image_id = Member(ann, "image_id", where);
    if (!image_id.is_number_integer()) {
      throw FormatError(where + ".image_id", "expected an integer");
    }
    const auto img = by_image.find(image_id.get<std::int64_t>());
    if (img == by_image.end()) {
      throw FormatError(where + ".image_id", "unknown image id");
    }
    if (ann.contains("iscrowd") && ann["iscrowd"].is_number() &&
        ann["iscrowd"].get<double>() != 0.0) {
      out.warnings.push_back(where + ": iscrowd flag ignored");
    }
    const json& seg = Member(ann, "segmentation", where);
    if (!seg.is_array()) {
      throw FormatError(where + ".segmentation", "unsupported encoding (RLE)");
    }

    std::vector<Ring> rings;
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const std::string rw = where + ".segmentation[" + std::to_string(k) + "]";
      const json& flat = seg[k];
      if (!flat.is_array() || flat.size() % 2 != 0) {
        throw FormatError(rw, "expected a flat [x1, y1, x2, y2, ...] array");
      }
      std::vector<Point2> pts;
      std::size_t repeats = 0;
      for (std::size_t j = 0; j < flat.size(); j += 2) {
        const Point2 p{Number(flat[j], rw), Number(flat[j + 1], rw)};
        if (pts.empty() || pts.back() != p) {
          pts.push_back(p);
        } else {
          ++repeats;
        }
      }
      // One explicit closing vertex is allowed.
      bool closed = false;
      while (pts.size() > 1 && pts.front() == pts.back()) {
        pts.pop_back();
        repeats += closed ? 1 : 0;
        closed = true;
      }
      if (repeats > 0) {
        out.warnings.push_back(rw + ": repeated vertices removed");
      }
      if (pts.size() < 3) {
        out.warnings.push_back(rw + ": ring with fewer than 3 vertices skipped");
        continue;
      }
      rings.push_back(MakeRing(std::move(pts), rw));
    }
    if (rings.empty()) {
      out.warnings.push_back(where + ": no usable ring, annotation skipped");
      continue;
    }
    const auto outer_it = std::max_element(
        rings.begin(), rings.end(), [](const Ring& a, const Ring& b) {
          return std::abs(SignedArea(a)) < std::abs(SignedArea(b));
        });
    Ring outer = *outer_it;
    rings.erase(outer_it);
    for (const Ring& hole : rings) {
      const bool inside =
          std::all_of(hole.vertices().begin(), hole.vertices().end(),
                      [&](Point2 p) { return PointInRing(p, outer); });
      if (!inside) {
        out.warnings.push_back(where +
                               ": ring outside the largest ring treated as a hole");
      }
    }
    double score = 1.0;
    if (ann.contains("score")) score = Number(ann["score"], where + ".score");
    out.records[img->second].instances.push_back(
        {Polygon(std::move(outer), std::move(rings)), score});
  }
  return out;
}

std::string WriteCocoAnnotations(std::span<const TileRecord> records) {
  json images = json::array();
  json anns = json::array();
  std::int64_t ann_id = 1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TileRecord& rec = records[i];
    const auto image_id = static_cast<std::int64_t>(i + 1);
    images.push_back({{"id", image_id},
                      {"file_name", rec.tile_id},
                      {"height", rec.height},
                      {"width", rec.width}});
    for (const Instance& inst : rec.instances) {
      json seg = json::array();
      auto flat = [](const Ring& ring) {
        json a = json::array();
        for (const Point2& p : ring.vertices()) {
          a.push_back(p.x);
          a.push_back(p.y);
        }
        return a;
      };
      seg.push_back(flat(inst.polygon.outer()));
      for (const Ring& h : inst.polygon.holes()) seg.push_back(flat(h));

      double min_x = inst.polygon.outer()[0].x, max_x = min_x;
      double min_y = inst.polygon.outer()[0].y, max_y = min_y;
      for (const Point2& p : inst.polygon.outer().vertices()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
      }
      anns.push_back({{"id", ann_id++},
                      {"image_id", image_id},
                      {"category_id", 100},
                      {"iscrowd", 0},
                      {"area", Area(inst.polygon)},
                      {"bbox", {min_x, min_y, max_x - min_x, max_y - min_y}},
                      {"score", inst.score},
                      {"segmentation", std::move(seg)}});
    }
  }
  json doc = {{"images", std::move(images)},
              {"annotations", std::move(anns)},
              {"categories", json::array({{{"id", 100}, {"name", "building"}}})}};
  return doc.dump(1) + "\n";
}

// -----------------------------------------------------------------------------
// SVG
// -----------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string Num(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

void AppendRingPath(std::string& d, const Ring& ring) {
  d += "M " + Num(ring[0].x) + " " + Num(ring[0].y);
  for (std::size_t i = 1; i < ring.size(); ++i) {
    d += " L " + Num(ring[i].x) + " " + Num(ring[i].y);
  }
  d += " L " + Num(ring[0].x) + " " + Num(ring[0].y) + " Z";
}

// Tile extent; falls back to the instances' bounds for unsized tiles.
std::pair<double, double> TileExtent(const TileRecord& rec) {
  if (rec.width > 0 && rec.height > 0) return {rec.width, rec.height};
  double w = 0.0;
  double h = 0.0;
  for (const Instance& inst : rec.instances) {
    for (const Point2& p : inst.polygon.outer().vertices()) {
      w = std::max(w, std::ceil(p.x));
      h = std::max(h, std::ceil(p.y));
    }
  }
  return {w, h};
}

}  // namespace

std::string RenderSvg(std::span<const TileRecord> records,
                      const SvgStyle& style) {
  double total_w = 0.0;
  double total_h = 0.0;
  std::vector<double> x_offsets;
  for (const TileRecord& rec : records) {
    const auto [w, h] = TileExtent(rec);
    x_offsets.push_back(total_w);
    total_w += w;
    total_h = std::max(total_h, h);
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(total_w) +
         "\" height=\"" + Num(total_h) + "\" viewBox=\"0 0 " + Num(total_w) +
         " " + Num(total_h) + "\">\n";
  if (style.background == SvgBackground::kChecker) {
    svg +=
        " <defs>\n"
        "  <pattern id=\"checker\" width=\"16\" height=\"16\" "
        "patternUnits=\"userSpaceOnUse\">\n"
        "   <rect width=\"16\" height=\"16\" fill=\"#ffffff\"/>\n"
        "   <rect width=\"8\" height=\"8\" fill=\"#d9d9d9\"/>\n"
        "   <rect x=\"8\" y=\"8\" width=\"8\" height=\"8\" fill=\"#d9d9d9\"/>\n"
        "  </pattern>\n"
        " </defs>\n";
    svg += " <rect width=\"" + Num(total_w) + "\" height=\"" + Num(total_h) +
           "\" fill=\"url(#checker)\"/>\n";
  }

  std::size_t color_index = 0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    const TileRecord& rec = records[t];
    svg += " <g data-tile-id=\"" + XmlEscape(rec.tile_id) +
           "\" transform=\"translate(" + Num(x_offsets[t]) + " 0)\">\n";
    for (const Instance& inst : rec.instances) {
      const char* color = kPalette[color_index++ % kPalette.size()];
      std::string d;
      AppendRingPath(d, inst.polygon.outer());
      for (const Ring& h : inst.polygon.holes()) {
        d += " ";
        AppendRingPath(d, h);
      }
      svg += "  <path d=\"" + d + "\" fill=\"" + color + "\" fill-opacity=\"" +
             Num(style.fill_opacity) + "\" fill-rule=\"evenodd\" stroke=\"" +
             color + "\" stroke-width=\"" + Num(style.stroke_width) + "\"/>\n";
    }
    svg += " </g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// -----------------------------------------------------------------------------
// Reports
// -----------------------------------------------------------------------------

namespace {

struct ReportField {
  const char* name;
  double EvalReport::*member;
};

constexpr std::array<ReportField, 12> kReportFields = {{
    {"ap", &EvalReport::ap},
    {"ap50", &EvalReport::ap50},
    {"ap75", &EvalReport::ap75},
    {"ar", &EvalReport::ar},
    {"ar50", &EvalReport::ar50},
    {"ar75", &EvalReport::ar75},
    {"ap_boundary", &EvalReport::ap_boundary},
    {"polis_mean", &EvalReport::polis_mean},
    {"ciou", &EvalReport::ciou},
    {"iou", &EvalReport::iou},
    {"vertex_f1", &EvalReport::vertex_f1},
    {"polis_match_rate", &EvalReport::polis_match_rate},
}};

struct CountField {
  const char* name;
  std::size_t EvalReport::*member;
};

constexpr std::array<CountField, 4> kCountFields = {{
    {"tiles", &EvalReport::tiles},
    {"gt_instances", &EvalReport::gt_instances},
    {"pred_instances", &EvalReport::pred_instances},
    {"polis_pairs", &EvalReport::polis_pairs},
}};

}  // namespace

json ReportToJson(const EvalReport& report) {
  json out = json::object();
  for (const auto& f : kReportFields) out[f.name] = report.*(f.member);
  for (const auto& f : kCountFields) out[f.name] = report.*(f.member);
  return out;
}

EvalReport ReportFromJson(const json& j) {
  EvalReport r;
  for (const auto& f : kReportFields) {
    r.*(f.member) = Number(Member(j, f.name, "report"), std::string("report.") + f.name);
  }
  for (const auto& f : kCountFields) {
    const json& v = Member(j, f.name, "report");
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      throw FormatError(std::string("report.") + f.name, "expected an integer");
    }
    r.*(f.member) = v.get<std::size_t>();
  }
  return r;
}

std::string FormatReportTable(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(18) << "metric" << std::right << std::setw(12)
      << "value" << "\n";
  out << std::string(30, '-') << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& f : kReportFields) {
    out << std::left << std::setw(18) << f.name << std::right << std::setw(12)
        << report.*(f.member) << "\n";
  }
  for (const auto& f : kCountFields) {
    out << std::left << std::setw(18) << f.name << std::right << std::setw(12)
        << report.*(f.member) << "\n";
  }
  return out.str();
}

// -----------------------------------------------------------------------------
// Files
// -----------------------------------------------------------------------------

std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteBinaryFile(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace polyform
