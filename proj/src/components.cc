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

// Thresholding, two-pass component labeling and Moore-neighbor boundary
// tracing.

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_map>

#include "components_internal.h"
#include "polyform/error.h"
#include "polyform/polygonize.h"

namespace polyform {

MaskGrid ThresholdMask(const SoftMaskGrid& soft, double tau) {
  MaskGrid out(soft.height(), soft.width(), 1, 0);
  for (int r = 0; r < soft.height(); ++r) {
    for (int c = 0; c < soft.width(); ++c) {
      out.at(r, c) = soft.at(r, c) > tau ? 1 : 0;
    }
  }
  return out;
}

namespace {

class DisjointSet {
 public:
  std::uint32_t Add() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t Find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::uint32_t a, std::uint32_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

Components ConnectedComponents(const MaskGrid& binary,
                               Connectivity connectivity) {
  const int h = binary.height();
  const int w = binary.width();
  LabelGrid provisional(h, w, 1, 0);
  DisjointSet sets;
  sets.Add();  // slot 0 is background

  // Already-visited neighbors in raster order.
  constexpr std::array<std::array<int, 2>, 4> kPrior = {
      {{0, -1}, {-1, 0}, {-1, -1}, {-1, 1}}};
  const int prior_count = connectivity == Connectivity::kEight ? 4 : 2;

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!binary.at(r, c)) continue;
      std::uint32_t label = 0;
      for (int k = 0; k < prior_count; ++k) {
        const int nr = r + kPrior[k][0];
        const int nc = c + kPrior[k][1];
        if (!binary.Contains(nr, nc)) continue;
        const std::uint32_t n = provisional.at(nr, nc);
        if (n == 0) continue;
        if (label == 0) {
          label = n;
        } else {
          sets.Union(label, n);
        }
      }
      provisional.at(r, c) = label ? label : sets.Add();
    }
  }

  Components out{LabelGrid(h, w, 1, 0), 0};
  std::unordered_map<std::uint32_t, std::uint32_t> final_label;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::uint32_t p = provisional.at(r, c);
      if (p == 0) continue;
      const std::uint32_t root = sets.Find(p);
      auto [it, inserted] = final_label.try_emplace(root, out.count + 1);
      if (inserted) ++out.count;
      out.labels.at(r, c) = it->second;
    }
  }
  return out;
}

namespace internal {

namespace {

// Clockwise on screen (y down), starting west.
constexpr std::array<std::array<int, 2>, 8> kDirs = {{{0, -1},
                                                       {-1, -1},
                                                       {-1, 0},
                                                       {-1, 1},
                                                       {0, 1},
                                                       {1, 1},
                                                       {1, 0},
                                                       {1, -1}}};
constexpr int kWest = 0;
constexpr int kSouth = 6;

int DirectionOf(int dr, int dc) {
  for (int d = 0; d < 8; ++d) {
    if (kDirs[d][0] == dr && kDirs[d][1] == dc) return d;
  }
  return -1;
}

// Binary occupancy of the component over its bounding box grown by one
// pixel, so the local border is always background.
class LocalMask {
 public:
  LocalMask(const LabelGrid& labels, std::uint32_t id, const PixelBox& box)
      : row0_(box.row0 - 1),
        col0_(box.col0 - 1),
        rows_(box.row1 - box.row0 + 3),
        cols_(box.col1 - box.col0 + 3),
        cells_(static_cast<std::size_t>(rows_) * cols_, 0) {
    for (int r = box.row0; r <= box.row1; ++r) {
      for (int c = box.col0; c <= box.col1; ++c) {
        if (labels.at(r, c) == id) cells_[Index(r - row0_, c - col0_)] = 1;
      }
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t Index(int r, int c) const {
    return static_cast<std::size_t>(r) * cols_ + c;
  }
  bool Member(int r, int c) const {
    return r >= 0 && c >= 0 && r < rows_ && c < cols_ && cells_[Index(r, c)];
  }
  PixelCoord Global(int r, int c) const { return {r + row0_, c + col0_}; }

 private:
  int row0_;
  int col0_;
  int rows_;
  int cols_;
  std::vector<std::uint8_t> cells_;
};

// Moore-neighbor tracing. The walk stops as soon as a (pixel, backtrack)
// state repeats; for the usual start state this is Jacob's criterion, and
// otherwise it trims a transient prefix so the chain is exactly one loop.
std::vector<PixelCoord> MooreTrace(const LocalMask& m, int start_r,
                                   int start_c, int start_back) {
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<PixelCoord> seq;
  int r = start_r;
  int c = start_c;
  int back = start_back;
  while (true) {
    const std::uint64_t key = m.Index(r, c) * 8 + static_cast<std::uint64_t>(back);
    if (auto it = seen.find(key); it != seen.end()) {
      std::vector<PixelCoord> cycle(seq.begin() + static_cast<std::ptrdiff_t>(it->second),
                                    seq.end());
      return cycle;
    }
    seen.emplace(key, seq.size());
    seq.push_back(m.Global(r, c));

    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (back + i) % 8;
      if (m.Member(r + kDirs[d][0], c + kDirs[d][1])) {
        found = d;
        break;
      }
    }
    if (found < 0) return seq;  // isolated pixel

    const int prev = (found + 7) % 8;
    const int nr = r + kDirs[found][0];
    const int nc = c + kDirs[found][1];
    const int br = r + kDirs[prev][0];
    const int bc = c + kDirs[prev][1];
    back = DirectionOf(br - nr, bc - nc);
    r = nr;
    c = nc;
  }
}

}  // namespace

std::vector<PixelBox> ComponentBoxes(const LabelGrid& labels,
                                     std::uint32_t count) {
  std::vector<PixelBox> boxes(count + 1);
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const std::uint32_t l = labels.at(r, c);
      if (l == 0 || l > count) continue;
      PixelBox& b = boxes[l];
      if (b.row1 < 0) {
        b = {r, c, r, c};
      } else {
        b.row0 = std::min(b.row0, r);
        b.col0 = std::min(b.col0, c);
        b.row1 = std::max(b.row1, r);
        b.col1 = std::max(b.col1, c);
      }
    }
  }
  return boxes;
}

std::vector<BoundaryChain> TraceComponent(const LabelGrid& labels,
                                          std::uint32_t id,
                                          const PixelBox& box,
                                          Connectivity connectivity) {
  const LocalMask m(labels, id, box);
  std::vector<BoundaryChain> chains;

  // Outer boundary from the first pixel in raster order; its west
  // neighbor is background.
  for (int r = 0; r < m.rows() && chains.empty(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m.Member(r, c)) {
        chains.push_back({MooreTrace(m, r, c, kWest), RingKind::kOuter});
        break;
      }
    }
  }
  if (chains.empty()) return chains;

  // Background reachable from the local border is outside; whatever is left
  // forms the holes. Background uses the connectivity dual to the
  // foreground's.
  const bool bg_eight = connectivity == Connectivity::kFour;
  const int dir_step = bg_eight ? 1 : 2;
  constexpr std::uint32_t kUnset = 0;
  constexpr std::uint32_t kOutside = 1;
  std::vector<std::uint32_t> region(static_cast<std::size_t>(m.rows()) * m.cols(),
                                    kUnset);
  std::vector<std::array<int, 2>> stack;
  auto flood = [&](int sr, int sc, std::uint32_t tag) {
    stack.push_back({sr, sc});
    region[m.Index(sr, sc)] = tag;
    while (!stack.empty()) {
      const auto [r, c] = stack.back();
      stack.pop_back();
      for (int d = 0; d < 8; d += dir_step) {
        const int nr = r + kDirs[d][0];
        const int nc = c + kDirs[d][1];
        if (nr < 0 || nc < 0 || nr >= m.rows() || nc >= m.cols()) continue;
        if (m.Member(nr, nc) || region[m.Index(nr, nc)] != kUnset) continue;
        region[m.Index(nr, nc)] = tag;
        stack.push_back({nr, nc});
      }
    }
  };
  flood(0, 0, kOutside);

  std::uint32_t next_tag = kOutside + 1;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m.Member(r, c) || region[m.Index(r, c)] != kUnset) continue;
      flood(r, c, next_tag++);
      // (r, c) is the hole's first pixel in raster order, so the pixel
      // above it belongs to the component.
      chains.push_back({MooreTrace(m, r - 1, c, kSouth), RingKind::kHole});
    }
  }
  return chains;
}

}  // namespace internal

std::vector<BoundaryChain> TraceBoundary(const LabelGrid& labels,
                                         std::uint32_t id,
                                         Connectivity connectivity) {
  if (id == 0) throw ValidationError("label 0 is background");
  std::uint32_t max_label = 0;
  for (std::uint32_t l : labels.data()) max_label = std::max(max_label, l);
  if (id > max_label) {
    throw ValidationError("component " + std::to_string(id) + " not found");
  }
  const auto boxes = internal::ComponentBoxes(labels, max_label);
  if (boxes[id].row1 < 0) {
    throw ValidationError("component " + std::to_string(id) + " not found");
  }
  return internal::TraceComponent(labels, id, boxes[id], connectivity);
}

}  // namespace polyform
