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

#ifndef POLYFORM_ERROR_H_
#define POLYFORM_ERROR_H_

#include <stdexcept>
#include <string>

namespace polyform {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid geometric input (degenerate segment, malformed ring, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// A value violates a documented precondition (flags, config, shapes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported file content. `field` names the offending part.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace polyform

#endif  // POLYFORM_ERROR_H_
