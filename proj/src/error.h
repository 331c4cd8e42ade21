// Copyright 2026 The spanparser Authors.
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

#ifndef SPANPARSER_ERROR_H_
#define SPANPARSER_ERROR_H_

#include <stdexcept>
#include <string>

namespace spanparser {

// Base class for all errors raised by the library. The C API maps each
// subclass onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bracketed-tree or tagged-sentence input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Inconsistent tree structure, e.g. a missing decision during reconstruction.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Tensor shape mismatch inside the differentiation engine.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration key or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// I/O failures, model/vocabulary mismatches and other data problems.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace spanparser

#endif  // SPANPARSER_ERROR_H_
