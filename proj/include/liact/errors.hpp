// Copyright 2026 The liact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIACT_ERRORS_HPP
#define LIACT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liact {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in spaces of different size (generator count, algebra
/// dimension, matrix size, chart dimension).
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

/// A point or group element lies outside the region where an operation is
/// defined (chart box, log chart, nonzero body for division).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Scenario/schema violation; `pointer` is the JSON pointer of the offending
/// value.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(pointer) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace liact

#endif  // LIACT_ERRORS_HPP
