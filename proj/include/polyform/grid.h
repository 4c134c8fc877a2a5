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

#ifndef POLYFORM_GRID_H_
#define POLYFORM_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyform/error.h"

namespace polyform {

// Dense row-major, channel-last raster: element (r, c, ch) lives at
// (r * width + c) * channels + ch.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int height, int width, int channels = 1, T fill = T{})
      : height_(height), width_(width), channels_(channels) {
    if (height < 0 || width < 0 || channels < 1) {
      throw ValidationError("invalid grid shape " + std::to_string(height) +
                            "x" + std::to_string(width) + "x" +
                            std::to_string(channels));
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
  }
  Grid(int height, int width, int channels, std::vector<T> data)
      : height_(height), width_(width), channels_(channels),
        data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
      throw ValidationError("grid data length does not match its shape");
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height_) * width_;
  }

  bool Contains(int r, int c) const {
    return r >= 0 && c >= 0 && r < height_ && c < width_;
  }

  T& at(int r, int c, int ch = 0) { return data_[Index(r, c, ch)]; }
  const T& at(int r, int c, int ch = 0) const { return data_[Index(r, c, ch)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width() &&
           channels_ == other.channels();
  }

  template <typename U>
  bool SameExtent(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t Index(int r, int c, int ch) const {
    return (static_cast<std::size_t>(r) * width_ + c) * channels_ + ch;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  std::vector<T> data_;
};

using MaskGrid = Grid<std::uint8_t>;
using SoftMaskGrid = Grid<float>;
using LabelGrid = Grid<std::uint32_t>;

// Element types a grid can carry on disk.
enum class DType : std::uint32_t { kU8 = 0, kF32 = 1 };

// Type-erased grid as exchanged through the RGF container.
using RasterGrid = std::variant<Grid<std::uint8_t>, Grid<float>>;

template <typename To, typename From>
Grid<To> ConvertGrid(const Grid<From>& in) {
  std::vector<To> out(in.data().begin(), in.data().end());
  return Grid<To>(in.height(), in.width(), in.channels(), std::move(out));
}

}  // namespace polyform

#endif  // POLYFORM_GRID_H_
