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

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "pnsm/errors.hpp"

namespace pnsm {

inline constexpr double kPi = 3.14159265358979323846;

/// A norm this small makes the nearest point on a circle factor non-unique.
inline constexpr double kDegenerateNorm = 1e-12;
/// How far a point may sit off the embedded manifold before angle recovery refuses it.
inline constexpr double kOnManifoldTol = 1e-9;

enum class AmbientKind { Euclidean, Sphere2, Torus2 };

/// Ambient structure descriptor: plain R^D, the unit sphere S^2 in R^3, or the
/// Clifford torus T^2 in R^4. Provides the forward embedding of angle pairs,
/// the nearest-point retraction, and angle recovery.
struct EmbeddingSpec {
  AmbientKind kind = AmbientKind::Euclidean;
  int ambient_dim = 0;

  static EmbeddingSpec euclidean(int dim) { return {AmbientKind::Euclidean, dim}; }
  static EmbeddingSpec sphere2() { return {AmbientKind::Sphere2, 3}; }
  static EmbeddingSpec torus2() { return {AmbientKind::Torus2, 4}; }

  bool is_euclidean() const { return kind == AmbientKind::Euclidean; }

  std::string name() const {
    switch (kind) {
      case AmbientKind::Euclidean: return "euclidean";
      case AmbientKind::Sphere2: return "sphere";
      case AmbientKind::Torus2: return "torus";
    }
    return "?";
  }
};

/// Maps an angle pair onto the embedded manifold.
/// sphere2: (cos psi cos phi, cos psi sin phi, sin psi); torus2: (cos phi, sin phi, cos psi, sin psi).
inline Eigen::VectorXd embed_angles(double phi, double psi, const EmbeddingSpec& spec) {
  switch (spec.kind) {
    case AmbientKind::Sphere2: {
      Eigen::VectorXd x(3);
      x << std::cos(psi) * std::cos(phi), std::cos(psi) * std::sin(phi), std::sin(psi);
      return x;
    }
    case AmbientKind::Torus2: {
      Eigen::VectorXd x(4);
      x << std::cos(phi), std::sin(phi), std::cos(psi), std::sin(psi);
      return x;
    }
    case AmbientKind::Euclidean:
      break;
  }
  throw std::invalid_argument("embed_angles: angles are undefined for a euclidean ambient");
}

/// Nearest point of the embedding set: identity for euclidean, radial for the
/// sphere, per-circle-factor normalization for the torus.
inline Eigen::VectorXd retract(const Eigen::VectorXd& z, const EmbeddingSpec& spec) {
  switch (spec.kind) {
    case AmbientKind::Euclidean:
      return z;
    case AmbientKind::Sphere2: {
      const double n = z.norm();
      if (n < kDegenerateNorm)
        throw DegenerateRetraction("sphere retraction at (near-)zero vector is not unique");
      return z / n;
    }
    case AmbientKind::Torus2: {
      const double n1 = std::hypot(z(0), z(1));
      const double n2 = std::hypot(z(2), z(3));
      if (n1 < kDegenerateNorm || n2 < kDegenerateNorm)
        throw DegenerateRetraction("torus retraction: a coordinate pair is (near-)zero");
      Eigen::VectorXd out(4);
      out << z(0) / n1, z(1) / n1, z(2) / n2, z(3) / n2;
      return out;
    }
  }
  throw std::invalid_argument("retract: unknown embedding kind");
}

namespace detail {
inline double to_half_open_pi(double a) {
  // atan2 lands in [-pi, pi]; report angles in (-pi, pi].
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}
}  // namespace detail

/// Recovers an angle pair from a point on the embedded manifold, both angles
/// in (-pi, pi]. The point must satisfy the image invariants within 1e-9.
inline std::pair<double, double> recover_angles(const Eigen::VectorXd& x,
                                                const EmbeddingSpec& spec) {
  switch (spec.kind) {
    case AmbientKind::Sphere2: {
      if (std::abs(x.norm() - 1.0) > kOnManifoldTol)
        throw OffManifold("recover_angles: point is not on the unit sphere");
      const double psi = std::asin(std::clamp(x(2), -1.0, 1.0));
      const double phi = detail::to_half_open_pi(std::atan2(x(1), x(0)));
      return {phi, psi};
    }
    case AmbientKind::Torus2: {
      if (std::abs(std::hypot(x(0), x(1)) - 1.0) > kOnManifoldTol ||
          std::abs(std::hypot(x(2), x(3)) - 1.0) > kOnManifoldTol)
        throw OffManifold("recover_angles: point is not on the torus");
      const double phi = detail::to_half_open_pi(std::atan2(x(1), x(0)));
      const double psi = detail::to_half_open_pi(std::atan2(x(3), x(2)));
      return {phi, psi};
    }
    case AmbientKind::Euclidean:
      break;
  }
  throw std::invalid_argument("recover_angles: angles are undefined for a euclidean ambient");
}

/// R^3 visualization torus with major radius 1 and minor radius 0.5.
inline Eigen::Vector3d torus_viz(double phi, double psi) {
  const double ring = 1.0 + 0.5 * std::cos(psi);
  return {ring * std::cos(phi), ring * std::sin(phi), 0.5 * std::sin(psi)};
}

}  // namespace pnsm
