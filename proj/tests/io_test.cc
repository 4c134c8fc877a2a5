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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

#include "polyform/error.h"
#include "support/corpus.h"

namespace polyform {
namespace {

using nlohmann::json;
using testing::Rectangle;
using testing::TestRng;

std::string Data(const char* name) {
  return ReadTextFile(std::filesystem::path(POLYFORM_TEST_DATA) / name);
}

std::string FieldOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.field();
  }
  return "<no error>";
}

std::size_t Count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

// --- RGF --------------------------------------------------------------------

TEST(RgfTest, SingleByteLayout) {
  Grid<std::uint8_t> g(1, 1, 1, 0);
  g.at(0, 0) = 7;
  const std::vector<std::uint8_t> bytes = WriteRgf(g);
  ASSERT_EQ(bytes.size(), 21u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RGF1");
  EXPECT_EQ(bytes[4], 1);   // height
  EXPECT_EQ(bytes[8], 1);   // width
  EXPECT_EQ(bytes[12], 1);  // channels
  EXPECT_EQ(bytes[16], 0);  // dtype u8
  EXPECT_EQ(bytes[20], 7);
}

TEST(RgfTest, FloatLayoutIsLittleEndian) {
  Grid<float> g(1, 2, 1, 0.0f);
  g.at(0, 1) = 1.0f;
  const std::vector<std::uint8_t> bytes = WriteRgf(g);
  ASSERT_EQ(bytes.size(), 28u);
  EXPECT_EQ(bytes[16], 1);
  EXPECT_EQ(bytes[24], 0x00);
  EXPECT_EQ(bytes[26], 0x80);
  EXPECT_EQ(bytes[27], 0x3f);
}

TEST(RgfTest, BitwiseRoundTrip) {
  TestRng rng(61);
  for (int i = 0; i < 30; ++i) {
    Grid<float> f(rng.UniformInt(1, 20), rng.UniformInt(1, 20), rng.UniformInt(1, 4));
    for (auto& v : f.data()) {
      const auto bits = static_cast<std::uint32_t>(rng.Bits());
      std::memcpy(&v, &bits, sizeof(v));
    }
    const std::vector<std::uint8_t> bytes = WriteRgf(f);
    EXPECT_EQ(WriteRgf(ReadRgf(bytes)), bytes);
    Grid<std::uint8_t> u(rng.UniformInt(1, 20), rng.UniformInt(1, 20), rng.UniformInt(1, 4));
    for (auto& v : u.data()) v = static_cast<std::uint8_t>(rng.Bits());
    EXPECT_EQ(std::get<Grid<std::uint8_t>>(ReadRgf(WriteRgf(u))), u);
  }
}

TEST(RgfTest, ErrorsNameTheField) {
  Grid<std::uint8_t> g(2, 2, 1, 0);
  std::vector<std::uint8_t> bytes = WriteRgf(g);

  auto bad_dtype = bytes;
  bad_dtype[16] = 9;
  try {
    ReadRgf(bad_dtype);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "dtype");
    EXPECT_NE(std::string(e.what()).find("unknown dtype 9"), std::string::npos);
  }

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(FieldOf([&] { ReadRgf(bad_magic); }), "magic");

  auto short_payload = bytes;
  short_payload.pop_back();
  EXPECT_EQ(FieldOf([&] { ReadRgf(short_payload); }), "payload");

  auto long_payload = bytes;
  long_payload.push_back(0);
  EXPECT_EQ(FieldOf([&] { ReadRgf(long_payload); }), "payload");

  auto zero_channels = bytes;
  zero_channels[12] = 0;
  EXPECT_EQ(FieldOf([&] { ReadRgf(zero_channels); }), "channels");

  EXPECT_EQ(FieldOf([&] { ReadRgf(std::span(bytes).first(10)); }), "width");
}

TEST(RgfTest, CorruptedInputNeverCrashes) {
  TestRng rng(62);
  Grid<float> g(3, 4, 2, 0.25f);
  const std::vector<std::uint8_t> clean = WriteRgf(g);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::uint8_t> bytes = clean;
    bytes.resize(rng.UniformInt(0, static_cast<int>(clean.size()) + 4), 0);
    for (int k = rng.UniformInt(0, 3); k > 0 && !bytes.empty(); --k) {
      bytes[rng.UniformInt(0, static_cast<int>(bytes.size()) - 1)] =
          static_cast<std::uint8_t>(rng.Bits());
    }
    try {
      ReadRgf(bytes);
    } catch (const FormatError&) {
    }
  }
}

// --- GeoJSON ----------------------------------------------------------------

TEST(GeoJsonTest, EmptyCollection) {
  const std::string text = WriteGeoJson({});
  const json doc = json::parse(text);
  EXPECT_EQ(doc["type"], "FeatureCollection");
  EXPECT_TRUE(doc["features"].empty());
  EXPECT_TRUE(ReadGeoJson(text).records.empty());
}

TEST(GeoJsonTest, RoundTripKeepsEmptyTilesAndMetadata) {
  const std::vector<TileRecord> records = {
      {"a", 64, 32, {{Rectangle(1, 2, 10, 20), 0.5}, {Rectangle(0.1, 0.2, 0.3, 0.7), 1.0}}},
      {"empty", 16, 16, {}},
      {"b", 8, 8, {{testing::SquareAnnulus(0, 0, 8, 2), 1.0}}}};
  const json meta = {{"method", "mav"}};
  const GeoJsonDocument doc = ReadGeoJson(WriteGeoJson(records, meta));
  EXPECT_TRUE(doc.has_tile_index);
  EXPECT_EQ(doc.records, records);
  EXPECT_EQ(doc.metadata, meta);
}

TEST(GeoJsonTest, FixtureRoundTrip) {
  const GeoJsonDocument doc = ReadGeoJson(Data("fixture.geojson"));
  ASSERT_FALSE(doc.records.empty());
  const std::string again = WriteGeoJson(doc.records, doc.metadata);
  EXPECT_EQ(ReadGeoJson(again).records, doc.records);
  EXPECT_EQ(WriteGeoJson(ReadGeoJson(again).records, doc.metadata), again);
}

TEST(GeoJsonTest, HoleIsSecondCoordinateArray) {
  const std::vector<TileRecord> records = {{"t", 20, 20, {{testing::SquareAnnulus(0, 0, 20, 5), 1.0}}}};
  const json doc = json::parse(WriteGeoJson(records));
  const json& coords = doc["features"][0]["geometry"]["coordinates"];
  ASSERT_EQ(coords.size(), 2u);
  EXPECT_EQ(coords[0].size(), 5u);  // closed
  EXPECT_EQ(coords[0][0], coords[0][4]);
  EXPECT_EQ(doc["features"][0]["properties"]["tile_id"], "t");
}

json Feature(json ring) {
  return {{"type", "Feature"},
          {"properties", {{"tile_id", "t"}, {"score", 1.0}}},
          {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}};
}

std::string Collection(json feature) {
  return json{{"type", "FeatureCollection"}, {"features", json::array({feature})}}.dump();
}

TEST(GeoJsonTest, RingValidation) {
  const json unclosed = json::parse("[[0,0],[1,0],[1,1],[0,1]]");
  const json too_short = json::parse("[[0,0],[1,0],[0,0]]");
  EXPECT_THROW(ReadGeoJson(Collection(Feature(unclosed))), FormatError);
  EXPECT_THROW(ReadGeoJson(Collection(Feature(too_short))), FormatError);
  const GeoJsonDocument ok =
      ReadGeoJson(Collection(Feature(json::parse("[[0,0],[1,0],[1,1],[0,0]]"))));
  ASSERT_EQ(ok.records.size(), 1u);
  EXPECT_FALSE(ok.has_tile_index);
  EXPECT_EQ(ok.records[0].instances[0].polygon.VertexCount(), 3u);
}

TEST(GeoJsonTest, ErrorPathsPointAtTheFeature) {
  json f = Feature(json::parse("[[0,0],[1,0],[1,1],[0,0]]"));
  f["geometry"]["type"] = "MultiPolygon";
  EXPECT_NE(FieldOf([&] { ReadGeoJson(Collection(f)); }).find("features[0]"),
            std::string::npos);
  EXPECT_THROW(ReadGeoJson(R"({"type":"Feature"})"), FormatError);
}

TEST(GeoJsonTest, TruncatedTextNeverCrashes) {
  const std::string text = Data("fixture.geojson");
  for (std::size_t n = 0; n + 1 < text.size(); n += 7) {
    try {
      ReadGeoJson(std::string_view(text).substr(0, n));
    } catch (const FormatError&) {
    } catch (const GeometryError&) {
    }
  }
}

// --- COCO -------------------------------------------------------------------

TEST(CocoTest, SquareAnnotation) {
  const std::string text = R"({
    "images": [{"id": 3, "file_name": "a.png", "height": 10, "width": 12}],
    "annotations": [{"id": 1, "image_id": 3, "segmentation": [[0, 0, 4, 0, 4, 4, 0, 4]]}]
  })";
  const CocoDocument doc = ReadCocoAnnotations(text);
  ASSERT_EQ(doc.records.size(), 1u);
  EXPECT_EQ(doc.records[0].tile_id, "a.png");
  EXPECT_EQ(doc.records[0].height, 10);
  EXPECT_EQ(doc.records[0].width, 12);
  ASSERT_EQ(doc.records[0].instances.size(), 1u);
  EXPECT_EQ(doc.records[0].instances[0].polygon, Rectangle(0, 0, 4, 4));
  EXPECT_TRUE(doc.warnings.empty());
}

TEST(CocoTest, SecondRingBecomesHole) {
  const std::string text = R"({
    "images": [{"id": 1, "height": 30, "width": 30}],
    "annotations": [{"image_id": 1, "segmentation":
        [[5, 5, 15, 5, 15, 15, 5, 15], [0, 0, 20, 0, 20, 20, 0, 20]]}]
  })";
  const CocoDocument doc = ReadCocoAnnotations(text);
  EXPECT_EQ(doc.records[0].tile_id, "1");
  const Polygon& p = doc.records[0].instances[0].polygon;
  EXPECT_EQ(p.outer().size(), 4u);
  ASSERT_EQ(p.holes().size(), 1u);
  EXPECT_DOUBLE_EQ(Area(p), 300.0);
}

TEST(CocoTest, FixtureRoundTrip) {
  const CocoDocument doc = ReadCocoAnnotations(Data("fixture_coco.json"));
  ASSERT_EQ(doc.records.size(), 2u);
  EXPECT_EQ(doc.records[1].instances[0].score, 0.75);
  const std::string again = WriteCocoAnnotations(doc.records);
  EXPECT_EQ(ReadCocoAnnotations(again).records, doc.records);
  const json written = json::parse(again);
  EXPECT_EQ(written["categories"][0]["name"], "building");
  EXPECT_DOUBLE_EQ(written["annotations"][0]["area"].get<double>(),
                   Area(doc.records[0].instances[0].polygon));
}

TEST(CocoTest, RleIsRejected) {
  const std::string text = R"({
    "images": [{"id": 1, "height": 4, "width": 4}],
    "annotations": [{"image_id": 1, "segmentation": {"counts": "abc", "size": [4, 4]}}]
  })";
  try {
    ReadCocoAnnotations(text);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("RLE"), std::string::npos);
    EXPECT_EQ(e.field(), "annotations[0].segmentation");
  }
}

TEST(CocoTest, WarningsForSanitizedInput) {
  const std::string text = R"({
    "images": [{"id": 1, "height": 10, "width": 10}],
    "annotations": [
      {"image_id": 1, "iscrowd": 1, "segmentation": [[0, 0, 4, 0, 4, 0, 4, 4, 0, 4]]},
      {"image_id": 1, "segmentation": [[0, 0, 1, 1]]}
    ]
  })";
  const CocoDocument doc = ReadCocoAnnotations(text);
  EXPECT_EQ(doc.records[0].instances.size(), 1u);
  EXPECT_EQ(doc.records[0].instances[0].polygon.VertexCount(), 4u);
  EXPECT_EQ(doc.warnings.size(), 4u);
}

TEST(CocoTest, ParseErrorReportsByteOffset) {
  try {
    ReadCocoAnnotations("{\"images\": [");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.field(), "json");
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  EXPECT_EQ(FieldOf([] { ReadCocoAnnotations(R"({"images": [], "annotations": [{"image_id": 5, "segmentation": []}]})"); }),
            "annotations[0].image_id");
}

// --- SVG --------------------------------------------------------------------

TEST(SvgTest, EmptyDocument) {
  const std::string svg = RenderSvg({});
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("<path"), std::string::npos);
}

TEST(SvgTest, SquarePath) {
  const std::vector<TileRecord> records = {{"t<&>\"", 16, 16, {{Rectangle(1, 1, 5, 5), 1.0}}}};
  const std::string svg = RenderSvg(records);
  EXPECT_EQ(Count(svg, "<path"), 1u);
  EXPECT_EQ(Count(svg, " L "), 4u);
  EXPECT_EQ(Count(svg, " Z"), 1u);
  EXPECT_NE(svg.find("fill-rule=\"evenodd\""), std::string::npos);
  EXPECT_NE(svg.find("t&lt;&amp;&gt;&quot;"), std::string::npos);
  EXPECT_EQ(svg.find("t<&"), std::string::npos);
}

TEST(SvgTest, DeterministicAndStyled) {
  const std::vector<TileRecord> records = testing::RectilinearCorpus(
      9, {.tiles = 3, .tile_size = 64, .max_polygons = 3, .min_side = 8, .max_side = 20});
  SvgStyle style;
  style.background = SvgBackground::kChecker;
  style.stroke_width = 2.5;
  const std::string a = RenderSvg(records, style);
  EXPECT_EQ(a, RenderSvg(records, style));
  EXPECT_NE(a.find("url(#checker)"), std::string::npos);
  EXPECT_NE(a.find("stroke-width=\"2.5\""), std::string::npos);
  EXPECT_EQ(Count(a, "<g data-tile-id="), 3u);
}

// --- reports ----------------------------------------------------------------

TEST(ReportTest, JsonRoundTrip) {
  EvalReport r;
  r.ap = 0.123456789012345;
  r.ap50 = 1.0;
  r.ar75 = -1.0;
  r.polis_mean = 1.0 / 3.0;
  r.tiles = 7;
  r.gt_instances = 40;
  r.polis_pairs = 38;
  r.polis_match_rate = 0.95;
  const json j = ReportToJson(r);
  EXPECT_EQ(j["tiles"], 7);
  const EvalReport back = ReportFromJson(json::parse(j.dump()));
  EXPECT_EQ(ReportToJson(back), j);
  EXPECT_EQ(back.ap, r.ap);
  EXPECT_EQ(back.polis_pairs, 38u);
  EXPECT_THROW(ReportFromJson(json::object()), FormatError);
}

TEST(ReportTest, TableListsEveryMetric) {
  EvalReport r;
  r.ap = 0.5;
  const std::string table = FormatReportTable(r);
  for (const char* name : {"ap", "ap50", "ap_boundary", "polis_mean", "ciou", "vertex_f1"}) {
    EXPECT_NE(table.find(name), std::string::npos) << name;
  }
  EXPECT_NE(table.find("0.5000"), std::string::npos);
}

TEST(FilesTest, TextAndBinaryRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "polyform_io_test";
  std::filesystem::create_directories(dir);
  WriteTextFile(dir / "a.txt", "hello\n");
  EXPECT_EQ(ReadTextFile(dir / "a.txt"), "hello\n");
  const std::vector<std::uint8_t> bytes = {0, 255, 10, 13};
  WriteBinaryFile(dir / "b.bin", bytes);
  EXPECT_EQ(ReadBinaryFile(dir / "b.bin"), bytes);
  EXPECT_THROW(ReadTextFile(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace polyform
