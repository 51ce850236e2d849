/*
 * Copyright 2026 The CHOCO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHOCO_COMMON_ERROR_H_
#define CHOCO_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace choco {

// Base class for every error raised by the library. Messages are short,
// lower-case phrases so callers and tests can match on them.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Decryption was attempted on a ciphertext whose noise budget is exhausted.
class NoiseOverflow : public Error {
 public:
  NoiseOverflow() : Error("noise overflow") {}
};

// Wire data could not be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace choco

#endif  // CHOCO_COMMON_ERROR_H_
