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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyform/error.h"
#include "polyform/io.h"
#include "polyform/parallel.h"

namespace polyform {

namespace fs = std::filesystem;
using nlohmann::json;

// -----------------------------------------------------------------------------
// Library entry points
// -----------------------------------------------------------------------------

namespace {

int GridExtent(int source, double scale) {
  return static_cast<int>(std::ceil(source / scale - 1e-9));
}

std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

TileRasters EncodeTile(const TileRecord& tile, double scale, bool with_afm) {
  if (!(scale >= 1.0) || !std::isfinite(scale)) {
    throw ValidationError("scale must be >= 1");
  }
  if (tile.height < 1 || tile.width < 1) {
    throw ValidationError("tile '" + tile.tile_id + "' has no size");
  }
  const int h = GridExtent(tile.height, scale);
  const int w = GridExtent(tile.width, scale);
  const InstanceSet scaled = DownscaleTargets(tile.instances, scale);
  TileRasters out;
  out.mask = RasterizeMask(scaled, h, w);
  if (with_afm) {
    out.afm = scaled.empty() ? AfmGrid(h, w, 2, 0.0) : EncodeAfm(scaled, h, w);
  }
  out.vertices = EncodeVertices(scaled, h, w);
  return out;
}

std::uint64_t TileSeed(std::uint64_t seed, std::size_t tile_index) {
  return Mix64(seed ^ Mix64(static_cast<std::uint64_t>(tile_index)));
}

std::vector<TileRecord> LoadAnnotations(const fs::path& path,
                                        std::vector<std::string>* warnings) {
  const std::string text = ReadTextFile(path);
  const json doc = ParseJson(text);
  if (doc.is_object() && doc.contains("images")) {
    CocoDocument coco = ReadCocoAnnotations(text);
    if (warnings != nullptr) {
      warnings->insert(warnings->end(), coco.warnings.begin(),
                       coco.warnings.end());
    }
    return std::move(coco.records);
  }
  return ReadGeoJson(text).records;
}

RoundtripReport RunRoundtrip(std::span<const TileRecord> gts,
                             const RoundtripOptions& options,
                             std::vector<TileRecord>* polygons) {
  ValidateDegradeSpec(options.degrade);
  PolygonizeConfig config = options.polygonize;
  config.scale = options.scale;
  config.workers = 1;
  ValidatePolygonizeConfig(config);

  struct TileOutcome {
    TileRecord polygons;
    EvalTile masks;
    std::size_t count_matches = 0;
    int fallback_rings = 0;
    int dropped_components = 0;
    int dropped_holes = 0;
  };
  std::vector<TileOutcome> outcomes(gts.size());
  ParallelFor(gts.size(), options.workers, [&](std::size_t i) {
    const TileRecord& gt = gts[i];
    const TileRasters rasters = EncodeTile(gt, options.scale, false);
    DegradeSpec spec = options.degrade;
    spec.rng_seed = TileSeed(options.degrade.rng_seed, i);
    const DegradedTargets degraded =
        Degrade(rasters.mask, rasters.vertices, spec);

    const PolygonizeResult result =
        PolygonizePipeline(degraded.mask, degraded.vertices.heatmap,
                           degraded.vertices.offsets, config);
    MaskInstances masks = ExtractMaskInstances(degraded.mask, config);

    TileOutcome& out = outcomes[i];
    out.polygons = {gt.tile_id, gt.height, gt.width, result.instances};
    out.masks.height = gt.height;
    out.masks.width = gt.width;
    out.masks.preds = std::move(masks.masks);
    out.masks.pred_scores = std::move(masks.scores);
    for (const Instance& inst : gt.instances) {
      out.masks.gts.push_back(
          RasterizeInstance(inst.polygon, gt.height, gt.width));
    }
    const MatchResult match =
        MatchInstances(result.instances, gt.instances, 0.5, gt.height, gt.width);
    for (const MatchPair& pair : match.pairs) {
      if (result.instances[pair.pred].polygon.VertexCount() ==
          gt.instances[pair.gt].polygon.VertexCount()) {
        ++out.count_matches;
      }
    }
    out.fallback_rings = result.fallback_rings;
    out.dropped_components = result.dropped_components;
    out.dropped_holes = result.dropped_holes;
  });

  // Same tile order as EvaluateCorpus so both AP figures see the same
  // cross-tile tie order.
  std::vector<std::size_t> order(gts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gts[a].tile_id < gts[b].tile_id;
  });

  RoundtripReport report;
  std::vector<EvalTile> mask_tiles;
  std::vector<TileRecord> poly_tiles;
  std::size_t count_matches = 0;
  std::size_t gt_instances = 0;
  for (std::size_t i : order) {
    TileOutcome& o = outcomes[i];
    mask_tiles.push_back(std::move(o.masks));
    poly_tiles.push_back(std::move(o.polygons));
    count_matches += o.count_matches;
    gt_instances += gts[i].instances.size();
    report.fallback_rings += o.fallback_rings;
    report.dropped_components += o.dropped_components;
    report.dropped_holes += o.dropped_holes;
  }
  report.mask = CocoApAr(mask_tiles, IouMode::kMask,
                         options.eval.boundary_d_frac, options.eval.max_dets,
                         options.workers);
  EvalConfig eval = options.eval;
  eval.workers = options.workers;
  report.polygon = EvaluateCorpus(poly_tiles, gts, eval);
  report.ap_gap_points = 100.0 * (report.mask.ap - report.polygon.ap);
  report.vertex_count_match_rate =
      gt_instances == 0 ? 1.0
                        : static_cast<double>(count_matches) / gt_instances;
  if (polygons != nullptr) *polygons = std::move(poly_tiles);
  return report;
}

json RoundtripToJson(const RoundtripReport& report) {
  return {{"mask",
           {{"ap", report.mask.ap},
            {"ap50", report.mask.ap50},
            {"ap75", report.mask.ap75},
            {"ar", report.mask.ar},
            {"ar50", report.mask.ar50},
            {"ar75", report.mask.ar75}}},
          {"polygon", ReportToJson(report.polygon)},
          {"ap_gap_points", report.ap_gap_points},
          {"vertex_count_match_rate", report.vertex_count_match_rate},
          {"fallback_rings", report.fallback_rings},
          {"dropped_components", report.dropped_components},
          {"dropped_holes", report.dropped_holes}};
}

// -----------------------------------------------------------------------------
// Command line
// -----------------------------------------------------------------------------

namespace {

// Failure that carries per-tile messages.
class TileErrors : public Error {
 public:
  explicit TileErrors(json tiles)
      : Error("one or more tiles failed"), tiles_(std::move(tiles)) {}
  const json& tiles() const { return tiles_; }

 private:
  json tiles_;
};

struct Size {
  int height = 0;
  int width = 0;
};

Size ParseSize(const std::string& text) {
  const auto x = text.find_first_of("xX");
  Size s;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    s.height = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    s.width = std::stoi(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ValidationError("--size must look like HxW, got '" + text + "'");
  }
  if (s.height < 1 || s.width < 1) {
    throw ValidationError("--size must be positive, got '" + text + "'");
  }
  return s;
}

void ApplySize(std::vector<TileRecord>& records, const std::string& size) {
  if (size.empty()) return;
  const Size s = ParseSize(size);
  for (TileRecord& rec : records) {
    rec.height = s.height;
    rec.width = s.width;
  }
}

struct ManifestTile {
  std::string tile_id;
  int height = 0;  // grid
  int width = 0;
  int source_height = 0;
  int source_width = 0;
  std::string mask;
  std::string afm;
  std::string heatmap;
  std::string offsets;
};

struct Manifest {
  double scale = 1.0;
  std::vector<ManifestTile> tiles;
  json extra = json::object();
};

json ManifestToJson(const Manifest& m) {
  json tiles = json::array();
  for (const ManifestTile& t : m.tiles) {
    tiles.push_back({{"tile_id", t.tile_id},
                     {"height", t.height},
                     {"width", t.width},
                     {"source_height", t.source_height},
                     {"source_width", t.source_width},
                     {"mask", t.mask},
                     {"afm", t.afm},
                     {"heatmap", t.heatmap},
                     {"offsets", t.offsets}});
  }
  json out = m.extra;
  out["scale"] = m.scale;
  out["tiles"] = std::move(tiles);
  return out;
}

Manifest LoadManifest(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  if (!fs::exists(path)) {
    throw FormatError("manifest", "missing " + path.string());
  }
  const json j = ParseJson(ReadTextFile(path));
  Manifest m;
  try {
    m.scale = j.at("scale").get<double>();
    for (const json& t : j.at("tiles")) {
      ManifestTile tile;
      tile.tile_id = t.at("tile_id").get<std::string>();
      tile.height = t.at("height").get<int>();
      tile.width = t.at("width").get<int>();
      tile.source_height = t.at("source_height").get<int>();
      tile.source_width = t.at("source_width").get<int>();
      tile.mask = t.at("mask").get<std::string>();
      tile.afm = t.at("afm").get<std::string>();
      tile.heatmap = t.at("heatmap").get<std::string>();
      tile.offsets = t.at("offsets").get<std::string>();
      m.tiles.push_back(std::move(tile));
    }
  } catch (const json::exception& e) {
    throw FormatError("manifest", e.what());
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "scale" && key != "tiles") m.extra[key] = value;
  }
  return m;
}

std::string TileFileName(std::size_t index, const char* kind) {
  std::ostringstream name;
  name << std::setfill('0') << std::setw(5) << index << '_' << kind << ".rgf";
  return name.str();
}

RasterGrid ReadRaster(const fs::path& path) {
  if (!fs::exists(path)) {
    throw FormatError("raster", "missing raster " + path.string());
  }
  try {
    return ReadRgf(ReadBinaryFile(path));
  } catch (const FormatError& e) {
    throw FormatError(e.field(), path.string() + ": " + e.what());
  }
}

Grid<float> ReadFloatRaster(const fs::path& path, int channels, int height,
                            int width) {
  RasterGrid raster = ReadRaster(path);
  Grid<float> grid = std::holds_alternative<Grid<float>>(raster)
                         ? std::get<Grid<float>>(std::move(raster))
                         : ConvertGrid<float>(std::get<Grid<std::uint8_t>>(raster));
  if (grid.channels() != channels || grid.height() != height ||
      grid.width() != width) {
    throw FormatError("raster", path.string() + ": unexpected shape");
  }
  return grid;
}

void WriteRaster(const fs::path& path, RasterGrid grid) {
  WriteBinaryFile(path, WriteRgf(grid));
}

// Runs fn for every index and collects failures as per-tile errors.
template <typename Fn>
void ForEachTile(std::size_t n, int workers,
                 const std::vector<std::string>& tile_ids, Fn fn) {
  std::vector<std::optional<std::string>> errors(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  json tiles = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) tiles.push_back({{"tile_id", tile_ids[i]}, {"error", *errors[i]}});
  }
  if (!tiles.empty()) throw TileErrors(std::move(tiles));
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create directory " + dir.string());
  }
}

struct CommonOptions {
  int workers = 0;  // 0 = default
};

int ResolveWorkers(const CommonOptions& common) {
  if (const char* env = std::getenv("POLYFORM_WORKERS"); env != nullptr && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw ValidationError(std::string("POLYFORM_WORKERS must be a positive "
                                        "integer, got '") + env + "'");
    }
    return static_cast<int>(v);
  }
  return common.workers > 0 ? common.workers : DefaultWorkerCount();
}

struct DegradeOptions {
  DegradeSpec spec;
  void Register(CLI::App* app) {
    app->add_option("--dilate", spec.dilate_radius, "Dilation radius (px)");
    app->add_option("--erode", spec.erode_radius, "Erosion radius (px)");
    app->add_option("--jitter-sigma", spec.boundary_jitter_sigma,
                    "Boundary jitter sigma (px)");
    app->add_option("--noise-sigma", spec.heatmap_noise_sigma,
                    "Heatmap noise sigma");
    app->add_option("--dropout", spec.vertex_dropout_prob,
                    "Vertex dropout probability");
    app->add_option("--spurious", spec.spurious_vertex_count,
                    "Spurious vertex peaks per tile");
    app->add_option("--seed", spec.rng_seed, "Random seed");
  }
};

struct PolygonizeOptions {
  PolygonizeConfig config;
  std::string connectivity = "8";
  std::string method = "mav";
  void Register(CLI::App* app, bool with_scale) {
    app->add_option("--mask-threshold", config.mask_threshold,
                    "Mask threshold")->capture_default_str();
    app->add_option("--topk", config.top_k, "Maximum vertices per tile")
        ->capture_default_str();
    app->add_option("--vertex-threshold", config.vertex_threshold,
                    "Heatmap peak threshold")->capture_default_str();
    app->add_option("--attract-dist", config.attract_dist,
                    "Attraction distance (grid px)")->capture_default_str();
    app->add_option("--merge-angle", config.merge_angle,
                    "Collinear merge angle (degrees)")->capture_default_str();
    if (with_scale) {
      app->add_option("--scale", config.scale, "Output coordinate scale")
          ->capture_default_str();
    }
    app->add_option("--connectivity", connectivity, "Pixel adjacency: 4 or 8")
        ->check(CLI::IsMember({"4", "8"}))->capture_default_str();
    app->add_option("--method", method, "Simplification: mav or dp")
        ->check(CLI::IsMember({"mav", "dp"}))->capture_default_str();
    app->add_option("--dp-tolerance", config.dp_fallback_tolerance,
                    "Douglas-Peucker tolerance (grid px)")->capture_default_str();
  }
  PolygonizeConfig Resolve() const {
    PolygonizeConfig c = config;
    c.connectivity = connectivity == "4" ? Connectivity::kFour : Connectivity::kEight;
    c.method = method == "dp" ? SimplifyMethod::kDouglasPeucker
                              : SimplifyMethod::kMavAttract;
    return c;
  }
};

json ConfigToJson(const PolygonizeConfig& c) {
  return {{"mask_threshold", c.mask_threshold},
          {"topk", c.top_k},
          {"vertex_threshold", c.vertex_threshold},
          {"attract_dist", c.attract_dist},
          {"merge_angle", c.merge_angle},
          {"scale", c.scale},
          {"connectivity", c.connectivity == Connectivity::kFour ? 4 : 8},
          {"method", c.method == SimplifyMethod::kDouglasPeucker ? "dp" : "mav"},
          {"dp_tolerance", c.dp_fallback_tolerance}};
}

json DegradeToJson(const DegradeSpec& s) {
  return {{"dilate", s.dilate_radius},
          {"erode", s.erode_radius},
          {"jitter_sigma", s.boundary_jitter_sigma},
          {"noise_sigma", s.heatmap_noise_sigma},
          {"dropout", s.vertex_dropout_prob},
          {"spurious", s.spurious_vertex_count},
          {"seed", s.rng_seed}};
}

// --- encode ------------------------------------------------------------------

struct EncodeArgs {
  std::string input;
  std::string out_dir;
  std::string size;
  double scale = 1.0;
};

void CmdEncode(const EncodeArgs& args, int workers, std::ostream& out) {
  if (!(args.scale >= 1.0)) throw ValidationError("--scale must be >= 1");
  std::vector<std::string> warnings;
  std::vector<TileRecord> records = LoadAnnotations(args.input, &warnings);
  ApplySize(records, args.size);
  EnsureDirectory(args.out_dir);

  Manifest manifest;
  manifest.scale = args.scale;
  manifest.tiles.resize(records.size());
  std::vector<std::string> ids;
  for (const TileRecord& r : records) ids.push_back(r.tile_id);
  const fs::path dir = args.out_dir;
  ForEachTile(records.size(), workers, ids, [&](std::size_t i) {
    const TileRasters rasters = EncodeTile(records[i], args.scale);
    ManifestTile& t = manifest.tiles[i];
    t.tile_id = records[i].tile_id;
    t.height = rasters.mask.height();
    t.width = rasters.mask.width();
    t.source_height = records[i].height;
    t.source_width = records[i].width;
    t.mask = TileFileName(i, "mask");
    t.afm = TileFileName(i, "afm");
    t.heatmap = TileFileName(i, "heatmap");
    t.offsets = TileFileName(i, "offsets");
    WriteRaster(dir / t.mask, rasters.mask);
    WriteRaster(dir / t.afm, ConvertGrid<float>(rasters.afm));
    WriteRaster(dir / t.heatmap, rasters.vertices.heatmap);
    WriteRaster(dir / t.offsets, rasters.vertices.offsets);
  });
  WriteTextFile(dir / kManifestName, ManifestToJson(manifest).dump(1) + "\n");
  for (const std::string& w : warnings) out << "warning: " << w << "\n";
  out << "encoded " << records.size() << " tiles into " << args.out_dir << "\n";
}

// --- degrade -----------------------------------------------------------------

struct DegradeArgs {
  std::string in_dir;
  std::string out_dir;
  DegradeOptions degrade;
};

void CmdDegrade(const DegradeArgs& args, int workers, std::ostream& out) {
  ValidateDegradeSpec(args.degrade.spec);
  const Manifest in = LoadManifest(args.in_dir);
  EnsureDirectory(args.out_dir);
  Manifest manifest = in;
  manifest.extra["degrade"] = DegradeToJson(args.degrade.spec);
  std::vector<std::string> ids;
  for (const ManifestTile& t : in.tiles) ids.push_back(t.tile_id);
  const fs::path src = args.in_dir;
  const fs::path dst = args.out_dir;
  ForEachTile(in.tiles.size(), workers, ids, [&](std::size_t i) {
    const ManifestTile& t = in.tiles[i];
    const Grid<float> mask = ReadFloatRaster(src / t.mask, 1, t.height, t.width);
    const Grid<float> afm = ReadFloatRaster(src / t.afm, 2, t.height, t.width);
    VertexGrids vertices{ReadFloatRaster(src / t.heatmap, 1, t.height, t.width),
                         ReadFloatRaster(src / t.offsets, 2, t.height, t.width), 0};
    MaskGrid binary(t.height, t.width, 1, 0);
    for (std::size_t k = 0; k < binary.data().size(); ++k) {
      binary.data()[k] = mask.data()[k] > 0.5f ? 1 : 0;
    }
    DegradeSpec spec = args.degrade.spec;
    spec.rng_seed = TileSeed(spec.rng_seed, i);
    const DegradedTargets d = Degrade(binary, vertices, spec);
    WriteRaster(dst / t.mask, d.mask);
    WriteRaster(dst / t.afm, afm);
    WriteRaster(dst / t.heatmap, d.vertices.heatmap);
    WriteRaster(dst / t.offsets, d.vertices.offsets);
  });
  WriteTextFile(dst / kManifestName, ManifestToJson(manifest).dump(1) + "\n");
  out << "degraded " << in.tiles.size() << " tiles into " << args.out_dir << "\n";
}

// --- polygonize --------------------------------------------------------------

struct PolygonizeArgs {
  std::string in_dir;
  std::string output;
  PolygonizeOptions options;
};

void CmdPolygonize(const PolygonizeArgs& args, int workers, std::ostream& out) {
  PolygonizeConfig config = args.options.Resolve();
  ValidatePolygonizeConfig(config);
  const Manifest manifest = LoadManifest(args.in_dir);
  config.workers = 1;

  std::vector<TileRecord> records(manifest.tiles.size());
  std::vector<std::string> ids;
  for (const ManifestTile& t : manifest.tiles) ids.push_back(t.tile_id);
  const fs::path dir = args.in_dir;
  ForEachTile(manifest.tiles.size(), workers, ids, [&](std::size_t i) {
    const ManifestTile& t = manifest.tiles[i];
    const Grid<float> mask = ReadFloatRaster(dir / t.mask, 1, t.height, t.width);
    const Grid<float> heat = ReadFloatRaster(dir / t.heatmap, 1, t.height, t.width);
    const Grid<float> off = ReadFloatRaster(dir / t.offsets, 2, t.height, t.width);
    PolygonizeResult result = PolygonizePipeline(mask, heat, off, config);
    records[i] = {t.tile_id, t.source_height, t.source_width,
                  std::move(result.instances)};
  });
  json metadata = ConfigToJson(config);
  WriteTextFile(args.output, WriteGeoJson(records, metadata));
  std::size_t n = 0;
  for (const TileRecord& r : records) n += r.instances.size();
  out << "wrote " << n << " polygons from " << records.size() << " tiles to "
      << args.output << "\n";
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string report;
  std::string size;
  EvalConfig config;
};

void CmdEval(const EvalArgs& args, int workers, std::ostream& out) {
  std::vector<std::string> warnings;
  std::vector<TileRecord> gts = LoadAnnotations(args.gt, &warnings);
  ApplySize(gts, args.size);
  for (const TileRecord& g : gts) {
    if (g.height < 1 || g.width < 1) {
      throw ValidationError("ground-truth tile '" + g.tile_id +
                            "' has no size; pass --size HxW");
    }
  }
  GeoJsonDocument pred = ReadGeoJson(ReadTextFile(args.pred));
  if (!pred.has_tile_index) {
    // Tiles without features are absent from such files.
    for (const TileRecord& g : gts) {
      const bool present = std::any_of(
          pred.records.begin(), pred.records.end(),
          [&](const TileRecord& p) { return p.tile_id == g.tile_id; });
      if (!present) pred.records.push_back({g.tile_id, g.height, g.width, {}});
    }
  }
  EvalConfig config = args.config;
  config.workers = workers;
  const EvalReport report = EvaluateCorpus(pred.records, gts, config);
  WriteTextFile(args.report, ReportToJson(report).dump(1) + "\n");
  for (const std::string& w : warnings) out << "warning: " << w << "\n";
  out << FormatReportTable(report);
}

// --- roundtrip ---------------------------------------------------------------

struct RoundtripArgs {
  std::string gt;
  std::string report;
  std::string size;
  std::string polygons;
  double scale = 1.0;
  DegradeOptions degrade;
  PolygonizeOptions polygonize;
};

void CmdRoundtrip(const RoundtripArgs& args, int workers, std::ostream& out) {
  RoundtripOptions options;
  options.scale = args.scale;
  options.degrade = args.degrade.spec;
  options.polygonize = args.polygonize.Resolve();
  options.polygonize.scale = args.scale;
  options.workers = workers;
  ValidateDegradeSpec(options.degrade);
  ValidatePolygonizeConfig(options.polygonize);

  std::vector<TileRecord> gts = LoadAnnotations(args.gt);
  ApplySize(gts, args.size);
  std::vector<TileRecord> polygons;
  const RoundtripReport report = RunRoundtrip(gts, options, &polygons);
  json j = RoundtripToJson(report);
  j["config"] = {{"polygonize", ConfigToJson(options.polygonize)},
                 {"degrade", DegradeToJson(options.degrade)}};
  WriteTextFile(args.report, j.dump(1) + "\n");
  if (!args.polygons.empty()) {
    WriteTextFile(args.polygons, WriteGeoJson(polygons, ConfigToJson(options.polygonize)));
  }
  std::ostringstream table;
  table << std::fixed << std::setprecision(4);
  table << std::left << std::setw(18) << "mask_ap" << std::right << std::setw(12)
        << report.mask.ap << "\n";
  table << std::left << std::setw(18) << "polygon_ap" << std::right
        << std::setw(12) << report.polygon.ap << "\n";
  table << std::left << std::setw(18) << "ap_gap_points" << std::right
        << std::setw(12) << report.ap_gap_points << "\n";
  out << table.str();
}

// --- render ------------------------------------------------------------------

struct RenderArgs {
  std::string input;
  std::string output;
  std::string background = "none";
  SvgStyle style;
};

void CmdRender(const RenderArgs& args, std::ostream& out) {
  if (!(args.style.stroke_width >= 0.0)) {
    throw ValidationError("--stroke-width must be >= 0");
  }
  if (!(args.style.fill_opacity >= 0.0 && args.style.fill_opacity <= 1.0)) {
    throw ValidationError("--fill-opacity must be in [0, 1]");
  }
  SvgStyle style = args.style;
  style.background =
      args.background == "checker" ? SvgBackground::kChecker : SvgBackground::kNone;
  const GeoJsonDocument doc = ReadGeoJson(ReadTextFile(args.input));
  WriteTextFile(args.output, RenderSvg(doc.records, style));
  out << "wrote " << args.output << "\n";
}

void PrintError(std::ostream& err, json error) { err << error.dump() << "\n"; }

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Raster-to-polygon conversion for building footprints", "polyform"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--workers", common.workers, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);

  EncodeArgs encode;
  CLI::App* encode_cmd = app.add_subcommand("encode", "Rasterize annotations");
  encode_cmd->add_option("input", encode.input, "GeoJSON or COCO file")
      ->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("out_dir", encode.out_dir, "Output directory")->required();
  encode_cmd->add_option("--size", encode.size, "Tile size HxW (overrides input)");
  encode_cmd->add_option("--scale", encode.scale, "Downscale factor")
      ->capture_default_str();

  DegradeArgs degrade;
  CLI::App* degrade_cmd = app.add_subcommand("degrade", "Degrade encoded targets");
  degrade_cmd->add_option("in_dir", degrade.in_dir, "Raster directory")->required();
  degrade_cmd->add_option("out_dir", degrade.out_dir, "Output directory")->required();
  degrade.degrade.Register(degrade_cmd);

  PolygonizeArgs polygonize;
  CLI::App* polygonize_cmd =
      app.add_subcommand("polygonize", "Convert rasters to polygons");
  polygonize_cmd->add_option("in_dir", polygonize.in_dir, "Raster directory")
      ->required();
  polygonize_cmd->add_option("output", polygonize.output, "Output GeoJSON")
      ->required();
  polygonize.options.Register(polygonize_cmd, true);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate predictions");
  eval_cmd->add_option("pred", eval.pred, "Prediction GeoJSON")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("gt", eval.gt, "Ground truth GeoJSON or COCO")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("report", eval.report, "Output report JSON")->required();
  eval_cmd->add_option("--size", eval.size, "Tile size HxW for unsized tiles");
  eval_cmd->add_option("--iou-thr", eval.config.iou_thr, "PoLiS pairing IoU")
      ->capture_default_str();
  eval_cmd->add_option("--vertex-dist", eval.config.vertex_dist,
                       "Vertex F1 distance (px)")->capture_default_str();

  RoundtripArgs roundtrip;
  CLI::App* roundtrip_cmd =
      app.add_subcommand("roundtrip", "Encode, polygonize and compare with masks");
  roundtrip_cmd->add_option("gt", roundtrip.gt, "Ground truth GeoJSON or COCO")
      ->required()->check(CLI::ExistingFile);
  roundtrip_cmd->add_option("report", roundtrip.report, "Output report JSON")
      ->required();
  roundtrip_cmd->add_option("--size", roundtrip.size, "Tile size HxW");
  roundtrip_cmd->add_option("--scale", roundtrip.scale, "Downscale factor")
      ->capture_default_str();
  roundtrip_cmd->add_option("--polygons", roundtrip.polygons,
                            "Also write the polygons as GeoJSON");
  roundtrip.degrade.Register(roundtrip_cmd);
  roundtrip.polygonize.Register(roundtrip_cmd, false);

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Draw polygons as SVG");
  render_cmd->add_option("input", render.input, "GeoJSON")
      ->required()->check(CLI::ExistingFile);
  render_cmd->add_option("output", render.output, "Output SVG")->required();
  render_cmd->add_option("--background", render.background, "none or checker")
      ->check(CLI::IsMember({"none", "checker"}))->capture_default_str();
  render_cmd->add_option("--stroke-width", render.style.stroke_width,
                         "Stroke width")->capture_default_str();
  render_cmd->add_option("--fill-opacity", render.style.fill_opacity,
                         "Fill opacity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    PrintError(err, {{"error", "usage"}, {"message", e.what()}});
    return 2;
  }

  try {
    const int workers = ResolveWorkers(common);
    if (encode_cmd->parsed()) {
      CmdEncode(encode, workers, out);
    } else if (degrade_cmd->parsed()) {
      CmdDegrade(degrade, workers, out);
    } else if (polygonize_cmd->parsed()) {
      CmdPolygonize(polygonize, workers, out);
    } else if (eval_cmd->parsed()) {
      CmdEval(eval, workers, out);
    } else if (roundtrip_cmd->parsed()) {
      CmdRoundtrip(roundtrip, workers, out);
    } else if (render_cmd->parsed()) {
      CmdRender(render, out);
    }
  } catch (const TileErrors& e) {
    PrintError(err, {{"error", e.what()}, {"tile_errors", e.tiles()}});
    return 1;
  } catch (const FormatError& e) {
    PrintError(err, {{"error", e.what()}, {"field", e.field()}});
    return 1;
  } catch (const ValidationError& e) {
    PrintError(err, {{"error", "validation"}, {"message", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    PrintError(err, {{"error", e.what()}});
    return 1;
  }
  return 0;
}

}  // namespace polyform
