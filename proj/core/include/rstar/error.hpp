/* Copyright 2026 The RStar Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RSTAR_ERROR_HPP_
#define RSTAR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rstar {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (missing file, short read/write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid content: bad magic, unknown version, malformed line.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Content checksum does not match the stored one.
class ChecksumError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace rstar

#endif  // RSTAR_ERROR_HPP_
