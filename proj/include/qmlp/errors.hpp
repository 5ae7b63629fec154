// Copyright 2026 The qmlp authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmlp {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed data handed to an operation (wrong length, non-finite entries,
/// asymmetric matrix, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Out-of-domain configuration or parameter value (epsilon <= 0, k > m, ...).
class InvalidParameter : public Error {
  public:
    using Error::Error;
};

/// A sample whose projection has (near-)zero norm and cannot be encoded.
class DegenerateStateError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure at runtime: eigensolver non-convergence, training
/// divergence, undefined metrics.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Inconsistent array dimensions between two artifacts that must agree.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Structurally invalid file: bad magic string, missing CSV header.
class FormatError : public Error {
  public:
    using Error::Error;
};

/// File carries a format version this build does not understand.
class VersionError : public FormatError {
  public:
    using FormatError::FormatError;
};

/// File ended mid-record.
class TruncatedFileError : public FormatError {
  public:
    using FormatError::FormatError;
};

/// Malformed content at a specific line of a text file.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
  public:
    using Error::Error;
};

/// Request exceeds a hard resource guard (e.g. dense oracle qubit limit).
class ResourceError : public Error {
  public:
    using Error::Error;
};

} // namespace qmlp
