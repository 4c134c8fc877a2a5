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

#ifndef POLYFORM_SRC_COMPONENTS_INTERNAL_H_
#define POLYFORM_SRC_COMPONENTS_INTERNAL_H_

#include <cstdint>
#include <vector>

#include "polyform/polygonize.h"

namespace polyform::internal {

// Inclusive pixel bounds; row1 < 0 marks an empty box.
struct PixelBox {
  int row0 = 0;
  int col0 = 0;
  int row1 = -1;
  int col1 = -1;
};

// Index l holds the box of label l; index 0 is unused.
std::vector<PixelBox> ComponentBoxes(const LabelGrid& labels,
                                     std::uint32_t count);

std::vector<BoundaryChain> TraceComponent(const LabelGrid& labels,
                                          std::uint32_t id,
                                          const PixelBox& box,
                                          Connectivity connectivity);

}  // namespace polyform::internal

#endif  // POLYFORM_SRC_COMPONENTS_INTERNAL_H_
