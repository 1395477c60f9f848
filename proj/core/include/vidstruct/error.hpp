// Copyright 2026 The vidstruct Authors
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

#ifndef VIDSTRUCT_ERROR_HPP_
#define VIDSTRUCT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vidstruct {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or not a supported input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed container data (Y4M header, truncated payload, PGM mismatch).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or malformed key-value text.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A plane was requested after it left the measure cache window.
class WindowError : public Error {
 public:
  using Error::Error;
};

}  // namespace vidstruct

#endif  // VIDSTRUCT_ERROR_HPP_
