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

#include "polyform/cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "polyform/io.h"
#include "support/corpus.h"

namespace polyform {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "polyform");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("polyform_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("POLYFORM_WORKERS");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("POLYFORM_WORKERS");
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // A small corpus written as GeoJSON.
  std::string WriteCorpus(std::uint64_t seed = 3, int tiles = 3, int size = 128) {
    corpus_ = testing::RectilinearCorpus(
        seed, {.tiles = tiles, .tile_size = size, .max_polygons = 4, .min_side = 12,
               .max_side = 40});
    const std::string path = Path("gt.geojson");
    WriteTextFile(path, WriteGeoJson(corpus_));
    return path;
  }

  fs::path dir_;
  std::vector<TileRecord> corpus_;
};

TEST_F(CliTest, EncodeWritesRastersAndManifest) {
  const std::string gt = WriteCorpus();
  const RunResult r = Cli({"encode", gt, Path("enc")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* kind : {"mask", "afm", "heatmap", "offsets"}) {
    EXPECT_TRUE(fs::exists(dir_ / "enc" / ("00000_" + std::string(kind) + ".rgf"))) << kind;
  }
  const json manifest = ParseJson(ReadTextFile(dir_ / "enc" / kManifestName));
  ASSERT_EQ(manifest["tiles"].size(), 3u);
  EXPECT_EQ(manifest["tiles"][0]["tile_id"], corpus_[0].tile_id);
  EXPECT_EQ(manifest["scale"], 1.0);

  const RasterGrid mask = ReadRgf(ReadBinaryFile(dir_ / "enc" / "00000_mask.rgf"));
  EXPECT_EQ(std::get<Grid<std::uint8_t>>(mask),
            RasterizeMask(corpus_[0].instances, 128, 128));
  const RasterGrid offsets = ReadRgf(ReadBinaryFile(dir_ / "enc" / "00001_offsets.rgf"));
  EXPECT_EQ(std::get<Grid<float>>(offsets).channels(), 2);
}

TEST_F(CliTest, EncodeIsByteReproducible) {
  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"encode", gt, Path("a")}).code, 0);
  ASSERT_EQ(Cli({"--workers", "3", "encode", gt, Path("b")}).code, 0);
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const fs::path other = dir_ / "b" / entry.path().filename();
    EXPECT_EQ(ReadBinaryFile(entry.path()), ReadBinaryFile(other)) << other;
  }
}

TEST_F(CliTest, EncodeScaleShrinksGrids) {
  const std::string gt = WriteCorpus(3, 1, 512);
  ASSERT_EQ(Cli({"encode", gt, Path("enc"), "--scale", "4"}).code, 0);
  const RasterGrid mask = ReadRgf(ReadBinaryFile(dir_ / "enc" / "00000_mask.rgf"));
  EXPECT_EQ(std::get<Grid<std::uint8_t>>(mask).height(), 128);
  EXPECT_EQ(std::get<Grid<std::uint8_t>>(mask).width(), 128);
  const json manifest = ParseJson(ReadTextFile(dir_ / "enc" / kManifestName));
  EXPECT_EQ(manifest["tiles"][0]["source_height"], 512);
  EXPECT_EQ(Cli({"encode", gt, Path("bad"), "--scale", "0.5"}).code, 1);
}

TEST_F(CliTest, PolygonizeRecordsConfigAndRecoversPolygons) {
  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"encode", gt, Path("enc")}).code, 0);
  const RunResult r = Cli({"polygonize", Path("enc"), Path("pred.geojson")});
  ASSERT_EQ(r.code, 0) << r.err;
  const GeoJsonDocument doc = ReadGeoJson(ReadTextFile(Path("pred.geojson")));
  EXPECT_EQ(doc.metadata["topk"], 300);
  EXPECT_EQ(doc.metadata["mask_threshold"], 0.5);
  EXPECT_EQ(doc.metadata["method"], "mav");
  ASSERT_EQ(doc.records.size(), corpus_.size());
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    EXPECT_EQ(doc.records[i].tile_id, corpus_[i].tile_id);
    EXPECT_EQ(doc.records[i].instances.size(), corpus_[i].instances.size());
  }
}

TEST_F(CliTest, UsageAndValidationErrors) {
  const RunResult unknown = Cli({"polygonize", Path("enc"), Path("o.geojson"), "--bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_EQ(ParseJson(unknown.err)["error"], "usage");
  EXPECT_EQ(Cli({}).code, 2);

  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"encode", gt, Path("enc")}).code, 0);
  const RunResult topk = Cli({"polygonize", Path("enc"), Path("o.geojson"), "--topk", "0"});
  EXPECT_EQ(topk.code, 1);
  EXPECT_EQ(ParseJson(topk.err)["error"], "validation");
  EXPECT_EQ(Cli({"polygonize", Path("enc"), Path("o.geojson"), "--method", "xyz"}).code, 2);
}

TEST_F(CliTest, MissingRasterIsNamed) {
  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"encode", gt, Path("enc")}).code, 0);
  fs::remove(dir_ / "enc" / "00001_heatmap.rgf");
  const RunResult r = Cli({"polygonize", Path("enc"), Path("o.geojson")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("00001_heatmap.rgf"), std::string::npos) << r.err;
  ParseJson(r.err);

  fs::remove(dir_ / "enc" / kManifestName);
  const RunResult m = Cli({"polygonize", Path("enc"), Path("o.geojson")});
  EXPECT_EQ(m.code, 1);
  EXPECT_EQ(ParseJson(m.err)["field"], "manifest");
}

TEST_F(CliTest, EvalSelfAndEmpty) {
  const std::string gt = WriteCorpus();
  const RunResult self = Cli({"eval", gt, gt, Path("self.json")});
  ASSERT_EQ(self.code, 0) << self.err;
  EXPECT_NE(self.out.find("polis_mean"), std::string::npos);
  const EvalReport report = ReportFromJson(ParseJson(ReadTextFile(Path("self.json"))));
  EXPECT_DOUBLE_EQ(report.ap, 1.0);
  EXPECT_EQ(report.polis_mean, 0.0);

  std::vector<TileRecord> empty = corpus_;
  for (TileRecord& t : empty) t.instances.clear();
  WriteTextFile(Path("empty.geojson"), WriteGeoJson(empty));
  ASSERT_EQ(Cli({"eval", Path("empty.geojson"), gt, Path("empty.json")}).code, 0);
  EXPECT_EQ(ReportFromJson(ParseJson(ReadTextFile(Path("empty.json")))).ap, 0.0);
}

TEST_F(CliTest, EvalReportsMisalignedTiles) {
  const std::string gt = WriteCorpus();
  std::vector<TileRecord> other = corpus_;
  other[0].tile_id = "stranger";
  WriteTextFile(Path("pred.geojson"), WriteGeoJson(other));
  const RunResult r = Cli({"eval", Path("pred.geojson"), gt, Path("r.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("stranger"), std::string::npos);
}

TEST_F(CliTest, RoundtripClean) {
  const std::string gt = WriteCorpus(5, 4, 128);
  const RunResult r = Cli({"roundtrip", gt, Path("rt.json"), "--polygons", Path("p.geojson")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = ParseJson(ReadTextFile(Path("rt.json")));
  EXPECT_LE(report["ap_gap_points"].get<double>(), 1.0);
  EXPECT_EQ(report["vertex_count_match_rate"], 1.0);
  EXPECT_TRUE(fs::exists(Path("p.geojson")));
}

TEST_F(CliTest, RoundtripZeroDegradeEqualsDefaultAndSeedsReproduce) {
  const std::string gt = WriteCorpus(6, 3, 128);
  ASSERT_EQ(Cli({"roundtrip", gt, Path("a.json")}).code, 0);
  ASSERT_EQ(Cli({"roundtrip", gt, Path("b.json"), "--dilate", "0", "--erode", "0",
                 "--jitter-sigma", "0", "--noise-sigma", "0", "--dropout", "0",
                 "--spurious", "0", "--seed", "17"})
                .code,
            0);
  json a = ParseJson(ReadTextFile(Path("a.json")));
  json b = ParseJson(ReadTextFile(Path("b.json")));
  a.erase("config");
  b.erase("config");
  EXPECT_EQ(a, b);

  const std::vector<std::string> noisy = {"--dilate", "1", "--jitter-sigma", "0.6",
                                          "--dropout", "0.1", "--seed", "99"};
  auto with = [&](const std::string& out) {
    std::vector<std::string> args = {"roundtrip", gt, Path(out)};
    args.insert(args.end(), noisy.begin(), noisy.end());
    return args;
  };
  ASSERT_EQ(Cli(with("n1.json")).code, 0);
  ASSERT_EQ(Cli(with("n2.json")).code, 0);
  EXPECT_EQ(ReadTextFile(Path("n1.json")), ReadTextFile(Path("n2.json")));
}

TEST_F(CliTest, DegradeThenPolygonize) {
  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"encode", gt, Path("enc")}).code, 0);
  const RunResult d = Cli({"degrade", Path("enc"), Path("deg"), "--dilate", "1",
                           "--dropout", "0.2", "--seed", "4"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(fs::exists(dir_ / "deg" / kManifestName));
  const RasterGrid mask = ReadRgf(ReadBinaryFile(dir_ / "deg" / "00000_mask.rgf"));
  EXPECT_TRUE(std::holds_alternative<Grid<float>>(mask));
  ASSERT_EQ(Cli({"polygonize", Path("deg"), Path("p.geojson")}).code, 0);
  EXPECT_EQ(Cli({"degrade", Path("enc"), Path("bad"), "--dropout", "2"}).code, 1);
}

TEST_F(CliTest, Render) {
  const std::string gt = WriteCorpus();
  ASSERT_EQ(Cli({"render", gt, Path("a.svg")}).code, 0);
  ASSERT_EQ(Cli({"render", gt, Path("b.svg")}).code, 0);
  EXPECT_EQ(ReadTextFile(Path("a.svg")), ReadTextFile(Path("b.svg")));
  WriteTextFile(Path("empty.geojson"), WriteGeoJson({}));
  ASSERT_EQ(Cli({"render", Path("empty.geojson"), Path("e.svg")}).code, 0);
  EXPECT_NE(ReadTextFile(Path("e.svg")).find("</svg>"), std::string::npos);
  EXPECT_NE(Cli({"render", gt, Path("c.svg"), "--background", "plaid"}).code, 0);
  ASSERT_EQ(Cli({"render", gt, Path("d.svg"), "--background", "checker"}).code, 0);
}

TEST_F(CliTest, WorkersEnvironmentOverridesFlag) {
  const std::string gt = WriteCorpus();
  setenv("POLYFORM_WORKERS", "nope", 1);
  const RunResult bad = Cli({"--workers", "2", "encode", gt, Path("enc")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("POLYFORM_WORKERS"), std::string::npos);
  setenv("POLYFORM_WORKERS", "2", 1);
  EXPECT_EQ(Cli({"--workers", "1", "encode", gt, Path("enc")}).code, 0);
}

TEST_F(CliTest, CocoInputIsAccepted) {
  const std::string gt = WriteCorpus();
  WriteTextFile(Path("gt.json"), WriteCocoAnnotations(corpus_));
  ASSERT_EQ(Cli({"encode", Path("gt.json"), Path("enc")}).code, 0);
  const RasterGrid mask = ReadRgf(ReadBinaryFile(dir_ / "enc" / "00002_mask.rgf"));
  EXPECT_EQ(std::get<Grid<std::uint8_t>>(mask),
            RasterizeMask(corpus_[2].instances, 128, 128));
}

}  // namespace
}  // namespace polyform
