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

#ifndef POLYFORM_INSTANCE_H_
#define POLYFORM_INSTANCE_H_

#include <string>
#include <vector>

#include "polyform/geometry.h"

namespace polyform {

// A building polygon with its confidence. Ground truth uses score 1.
struct Instance {
  Polygon polygon;
  double score = 1.0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

using InstanceSet = std::vector<Instance>;

// One image tile with its instances, in that tile's pixel frame.
struct TileRecord {
  std::string tile_id;
  int height = 0;
  int width = 0;
  InstanceSet instances;

  friend bool operator==(const TileRecord&, const TileRecord&) = default;
};

}  // namespace polyform

#endif  // POLYFORM_INSTANCE_H_
