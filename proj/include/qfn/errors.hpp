// Copyright 2026 The qfn developers
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

#include <stdexcept>
#include <string>
#include <utility>

namespace qfn {

/// Base class for all library errors. Carries a stable machine-readable
/// code, the name of the offending block (when one exists) and the smallest
/// pivot magnitude seen during a failed inversion (negative when not
/// applicable). The CLI serializes these fields as its diagnostic JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string block = {},
        double smallest_pivot = -1.0)
      : std::runtime_error(message),
        code_(std::move(code)),
        block_(std::move(block)),
        smallest_pivot_(smallest_pivot) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& block() const noexcept { return block_; }
  double smallest_pivot() const noexcept { return smallest_pivot_; }

 private:
  std::string code_;
  std::string block_;
  double smallest_pivot_;
};

class SingularError : public Error {
 public:
  explicit SingularError(const std::string& msg, std::string block = {},
                         double pivot = -1.0)
      : Error("Singular", msg, std::move(block), pivot) {}
};

class UnknownLabelError : public Error {
 public:
  explicit UnknownLabelError(const std::string& msg)
      : Error("UnknownLabel", msg) {}
};

class DimMismatchError : public Error {
 public:
  explicit DimMismatchError(const std::string& msg)
      : Error("DimMismatch", msg) {}
};

class LabelCollisionError : public Error {
 public:
  explicit LabelCollisionError(const std::string& msg)
      : Error("LabelCollision", msg) {}
};

class SizeMismatchError : public Error {
 public:
  explicit SizeMismatchError(const std::string& msg)
      : Error("SizeMismatch", msg) {}
};

class MalformedVError : public Error {
 public:
  explicit MalformedVError(const std::string& msg)
      : Error("MalformedV", msg) {}
};

class NotRepresentableError : public Error {
 public:
  explicit NotRepresentableError(const std::string& msg,
                                 std::string block = {}, double pivot = -1.0)
      : Error("NotRepresentable", msg, std::move(block), pivot) {}
};

class SeriesNotRepresentableError : public Error {
 public:
  explicit SeriesNotRepresentableError(const std::string& msg,
                                       std::string block = {},
                                       double pivot = -1.0)
      : Error("SeriesNotRepresentable", msg, std::move(block), pivot) {}
};

class IllPosedError : public Error {
 public:
  explicit IllPosedError(const std::string& msg, std::string block = {},
                         double pivot = -1.0)
      : Error("IllPosed", msg, std::move(block), pivot) {}
};

class SchurUndefinedError : public Error {
 public:
  explicit SchurUndefinedError(const std::string& msg, std::string block = {},
                               double pivot = -1.0)
      : Error("SchurUndefined", msg, std::move(block), pivot) {}
};

class EvenCycleError : public Error {
 public:
  explicit EvenCycleError(const std::string& msg)
      : Error("EvenCycle", msg) {}
};

class UnknownPortError : public Error {
 public:
  explicit UnknownPortError(const std::string& msg)
      : Error("UnknownPort", msg) {}
};

class DuplicateConnectionError : public Error {
 public:
  explicit DuplicateConnectionError(const std::string& msg)
      : Error("DuplicateConnection", msg) {}
};

class InvariantViolationError : public Error {
 public:
  explicit InvariantViolationError(const std::string& msg)
      : Error("InvariantViolation", msg) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t byte_position)
      : Error("SyntaxError", msg), byte_position_(byte_position) {}

  std::size_t byte_position() const noexcept { return byte_position_; }

 private:
  std::size_t byte_position_;
};

}  // namespace qfn
