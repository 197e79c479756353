// Copyright 2026 The Interest Storyboard Authors.
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

#ifndef INTEREST_ERRORS_H_
#define INTEREST_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interest {

// Root of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates a documented precondition.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A numerical operation left its domain (negative precision, failed
// factorization, zero-norm vector).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// State-dependent precondition failed (e.g. sampling a pair from a store with
// fewer than two images).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Durable storage failed. The operation had no effect.
class IoError : public Error {
 public:
  using Error::Error;
};

// A malformed input record. `record()` is 1-based; 0 when not applicable.
class LoadError : public Error {
 public:
  LoadError(const std::string& what, std::size_t record)
      : Error(what), record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

// Remote call failed; safe to retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace interest

#endif  // INTEREST_ERRORS_H_
