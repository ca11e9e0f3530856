/*
 * Copyright (c) 2026, the pnsm authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace pnsm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nearest point on the embedding set is not unique (a required norm is ~0).
struct DegenerateRetraction : Error {
  using Error::Error;
};

/// Point handed to angle recovery does not satisfy the image invariants.
struct OffManifold : Error {
  using Error::Error;
};

/// No sample lies strictly inside the query ball, so the weight normalizer is zero.
struct EmptyNeighborhood : Error {
  using Error::Error;
};

/// Top two eigenvalues of a weighted projector sum are too close for P1 to be unique.
struct AmbiguousDirection : Error {
  AmbiguousDirection(int direction, double gap, const std::string& what)
      : Error(what), direction(direction), gap(gap) {}
  int direction;  ///< 0-based index of the offending principal direction
  double gap;     ///< eigenvalue gap observed
};

/// The symmetric eigensolver did not converge.
struct EigenFailure : Error {
  using Error::Error;
};

/// Curve second derivative vanishes where a noise frame is required.
struct FrameDegenerate : Error {
  using Error::Error;
};

/// Fewer than two distinct labels were supplied to a clustering metric.
struct LabelError : Error {
  using Error::Error;
};

/// Two clouds passed to a paired metric have different shapes.
struct ShapeMismatch : Error {
  using Error::Error;
};

/// More than half of the points failed to project at some level.
struct FitAborted : Error {
  FitAborted(int level_dim, std::size_t failures, std::size_t total, const std::string& what)
      : Error(what), level_dim(level_dim), failures(failures), total(total) {}
  int level_dim;
  std::size_t failures;
  std::size_t total;
};

/// CSV or manifest file could not be read or parsed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace pnsm
