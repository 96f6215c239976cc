// xvalign/error.h

// Copyright 2026  The xvalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef XVALIGN_ERROR_H_
#define XVALIGN_ERROR_H_

#include <stdexcept>
#include <string>

namespace xvalign {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (embedding, rotation, PCA or suite files).
/// line() is 1-based; 0 when the problem is not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string &source, int line, const std::string &what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by iterative solvers when the numerics break down, e.g. Sinkhorn
/// scaling vectors underflowing. iteration() is the 0-based iteration index.
class NumericalError : public Error {
 public:
  NumericalError(const std::string &what, int iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace xvalign

#endif  // XVALIGN_ERROR_H_
