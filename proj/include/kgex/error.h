/*
 * Copyright 2026 The KGEx Authors.
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

#ifndef KGEX_ERROR_H_
#define KGEX_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgex {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input line. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value outside its permitted domain (weights, beta, hyperparameters).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Binary or text artifact that does not follow its file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inputs that are individually valid but do not fit together.
class MismatchError : public Error {
 public:
  using Error::Error;
};

// Coincident points passed to the angle-wise potential.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Training diverged. Carries the epoch and batch where it happened.
class TrainingError : public Error {
 public:
  TrainingError(std::size_t epoch, std::size_t batch, const std::string& what)
      : Error("epoch " + std::to_string(epoch) + ", batch " +
              std::to_string(batch) + ": " + what),
        epoch_(epoch),
        batch_(batch) {}
  std::size_t epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

}  // namespace kgex

#endif  // KGEX_ERROR_H_
