// Copyright 2026 The Siegel Lab Authors
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

namespace siegel {

// Every failure raised by the library derives from Error, so callers (the CLI
// in particular) can map a whole family to one exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SIEGEL_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    explicit Name(const std::string& what) \
        : Error(#Name ": " + what) {}      \
  }

SIEGEL_DEFINE_ERROR(DomainError);
SIEGEL_DEFINE_ERROR(ParseError);
SIEGEL_DEFINE_ERROR(DegenerateOrbit);
SIEGEL_DEFINE_ERROR(DegenerateParameter);
SIEGEL_DEFINE_ERROR(NoCriticalPoint);
SIEGEL_DEFINE_ERROR(SaturatedInterval);
SIEGEL_DEFINE_ERROR(InvalidTree);
SIEGEL_DEFINE_ERROR(DepthExceeded);
SIEGEL_DEFINE_ERROR(InvalidThresholds);

// Numerical non-convergence; the CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SolverDiverged : public NumericalError {
 public:
  explicit SolverDiverged(const std::string& what)
      : NumericalError("SolverDiverged: " + what) {}
};

class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& what, double lower, double upper)
      : NumericalError("ConvergenceFailure: " + what + " (Gershgorin bounds [" +
                       std::to_string(lower) + ", " + std::to_string(upper) +
                       "])"),
        lower_(lower),
        upper_(upper) {}

  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

#undef SIEGEL_DEFINE_ERROR

}  // namespace siegel
