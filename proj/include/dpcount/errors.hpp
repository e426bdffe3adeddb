// Copyright 2026 The dpcount Authors
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

#ifndef DPCOUNT_ERRORS_HPP_
#define DPCOUNT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpcount {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric parameter is outside the range an operation accepts.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input data: out-of-range ids, duplicate ids in a batch, bad files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A well-formed stream that breaks the rules of its declared model, or that a
// mechanism cannot accept.
class ValidationError : public Error {
 public:
  using Error::Error;
};

namespace internal {

inline void require_parameter(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace internal
}  // namespace dpcount

#endif  // DPCOUNT_ERRORS_HPP_
