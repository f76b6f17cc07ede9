// Copyright 2026 The LIC Authors. All Rights Reserved.
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

#ifndef LIC_ERRORS_H_
#define LIC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lic {

// Base of every error raised by the library. Callers that only need a
// message can catch this; the subclasses exist so tests and the CLI can
// distinguish failure classes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us something malformed (shape mismatch, bad extents, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A non-finite value showed up during a forward or backward pass.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CorruptModelError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersionError : public Error {
 public:
  using Error::Error;
};

class NotABitstreamError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

// Bitstream was produced by a different model than the one supplied.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

class UnencodableSymbolError : public Error {
 public:
  using Error::Error;
};

}  // namespace lic

#endif  // LIC_ERRORS_H_
