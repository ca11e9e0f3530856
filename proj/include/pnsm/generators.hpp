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
#include <cstdint>
#include <string>
#include <vector>

#include "pnsm/embedding.hpp"
#include "pnsm/errors.hpp"
#include "pnsm/rng.hpp"
#include "pnsm/types.hpp"

namespace pnsm {

enum class ScenarioCase {
  EuclidLine,
  EuclidCircle,
  EuclidInvolute,
  SphereCircle,
  SphereTennis,
  SphereInvolute,
  TorusCircleMajor,
  TorusCircleMinor,
  TorusInvolute,
};

inline bool is_euclidean_case(ScenarioCase c) {
  return c == ScenarioCase::EuclidLine || c == ScenarioCase::EuclidCircle ||
         c == ScenarioCase::EuclidInvolute;
}

inline EmbeddingSpec case_embedding(ScenarioCase c) {
  switch (c) {
    case ScenarioCase::EuclidLine:
    case ScenarioCase::EuclidCircle:
    case ScenarioCase::EuclidInvolute:
      return EmbeddingSpec::euclidean(3);
    case ScenarioCase::SphereCircle:
    case ScenarioCase::SphereTennis:
    case ScenarioCase::SphereInvolute:
      return EmbeddingSpec::sphere2();
    case ScenarioCase::TorusCircleMajor:
    case ScenarioCase::TorusCircleMinor:
    case ScenarioCase::TorusInvolute:
      return EmbeddingSpec::torus2();
  }
  throw std::invalid_argument("case_embedding: unknown case");
}

inline std::string case_name(ScenarioCase c) {
  switch (c) {
    case ScenarioCase::EuclidLine: return "euclid-line";
    case ScenarioCase::EuclidCircle: return "euclid-circle";
    case ScenarioCase::EuclidInvolute: return "euclid-involute";
    case ScenarioCase::SphereCircle: return "sphere-circle";
    case ScenarioCase::SphereTennis: return "sphere-tennis";
    case ScenarioCase::SphereInvolute: return "sphere-involute";
    case ScenarioCase::TorusCircleMajor: return "torus-circle-major";
    case ScenarioCase::TorusCircleMinor: return "torus-circle-minor";
    case ScenarioCase::TorusInvolute: return "torus-involute";
  }
  return "?";
}

/// Simulation scenario. sigma1/sigma2 drive the two normal-space noise
/// directions of the Euclidean cases; sigma drives the angle-plane noise of
/// the shape cases. make() fills the per-case defaults.
struct ScenarioSpec {
  ScenarioCase scenario = ScenarioCase::EuclidLine;
  Index n = 0;
  double sigma1 = 0.1;
  double sigma2 = 0.05;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  // The circle case is printed as a full circle although the text writes
  // t in (0,1); this flag restores the literal interval.
  bool strict_circle_interval = false;

  static ScenarioSpec make(ScenarioCase c, Index n, std::uint64_t seed) {
    ScenarioSpec s;
    s.scenario = c;
    s.n = n;
    s.seed = seed;
    if (c == ScenarioCase::EuclidInvolute) {
      s.sigma1 = 0.09;
      s.sigma2 = 0.03;
    }
    return s;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("ScenarioSpec: n must be at least 1");
    if (sigma1 < 0.0 || sigma2 < 0.0 || sigma < 0.0)
      throw std::invalid_argument("ScenarioSpec: noise levels must be nonnegative");
  }
};

namespace curves {

constexpr double kFrameDegenerateTol = 1e-12;

// --- Euclidean generating curves ------------------------------------------

inline Eigen::Vector3d euclid_line(double t) { return {t, 0.0, 0.0}; }
inline Eigen::Vector3d euclid_circle(double t) { return {std::cos(t), std::sin(t), 0.0}; }
inline Eigen::Vector3d euclid_involute(double t) {
  return {t / 6.0 * std::cos(t), t / 6.0 * std::sin(t), t / 6.0};
}
inline Eigen::Vector3d euclid_involute_d1(double t) {
  return {(std::cos(t) - t * std::sin(t)) / 6.0, (std::sin(t) + t * std::cos(t)) / 6.0, 1.0 / 6.0};
}
inline Eigen::Vector3d euclid_involute_d2(double t) {
  return {(-2.0 * std::sin(t) - t * std::cos(t)) / 6.0, (2.0 * std::cos(t) - t * std::sin(t)) / 6.0,
          0.0};
}

/// Frenet-style orthonormal frame of the Euclidean involute. The normal is
/// the component of the second derivative orthogonal to the tangent; using
/// the raw second derivative would tilt into the tangent because the curve
/// is not arc-length parametrized.
struct InvoluteFrame {
  Eigen::Vector3d tangent, normal, binormal;
};

inline InvoluteFrame euclid_involute_frame(double t) {
  const Eigen::Vector3d d1 = euclid_involute_d1(t);
  const Eigen::Vector3d d2 = euclid_involute_d2(t);
  if (d2.norm() < kFrameDegenerateTol)
    throw FrameDegenerate("involute frame: second derivative vanishes at t = " + std::to_string(t));
  InvoluteFrame f;
  f.tangent = d1.normalized();
  const Eigen::Vector3d residual = d2 - d2.dot(f.tangent) * f.tangent;
  if (residual.norm() < kFrameDegenerateTol)
    throw FrameDegenerate("involute frame: normal direction undefined at t = " + std::to_string(t));
  f.normal = residual.normalized();
  f.binormal = f.tangent.cross(f.normal).normalized();
  return f;
}

// --- Angle-plane generating curves (shape cases) ---------------------------

inline Eigen::Vector2d sphere_circle(double t) { return {t, 0.0}; }

/// Tennis curve, two branches split at t = pi.
inline Eigen::Vector2d sphere_tennis(double t) {
  const double shift = t < kPi ? -kPi / 2.0 : kPi / 2.0;
  const double T = std::tan(t);
  return {std::atan(T * T * T + shift), std::acos(std::sqrt(3.0) * std::sin(t) * std::cos(t))};
}

inline Eigen::Vector2d sphere_tennis_d2(double t) {
  const double shift = t < kPi ? -kPi / 2.0 : kPi / 2.0;
  const double T = std::tan(t);
  const double C = 1.0 + T * T;  // sec^2
  const double u = T * T * T + shift;
  const double du = 3.0 * T * T * C;
  const double ddu = 6.0 * T * C * C + 6.0 * T * T * T * C;
  const double denom = 1.0 + u * u;
  const double phi_dd = ddu / denom - 2.0 * u * du * du / (denom * denom);

  const double w = std::sqrt(3.0) * std::sin(t) * std::cos(t);
  const double dw = std::sqrt(3.0) * std::cos(2.0 * t);
  const double ddw = -2.0 * std::sqrt(3.0) * std::sin(2.0 * t);
  const double root = std::sqrt(1.0 - w * w);  // w^2 <= 3/4, never singular
  const double psi_dd = -ddw / root - w * dw * dw / (root * root * root);
  return {phi_dd, psi_dd};
}

inline Eigen::Vector2d angle_involute(double t) {
  return {t / 10.0 * std::cos(t), t / 10.0 * std::sin(t)};
}
inline Eigen::Vector2d angle_involute_d2(double t) {
  return {(-2.0 * std::sin(t) - t * std::cos(t)) / 10.0,
          (2.0 * std::cos(t) - t * std::sin(t)) / 10.0};
}

}  // namespace curves

struct EuclideanSample {
  PointCloud cloud;        // n x 3
  std::vector<double> t;   // ground-truth curve parameters
};

struct ShapeSample {
  Eigen::MatrixX2d angles;  // noisy (phi, psi) pairs in the angle plane
  std::vector<double> t;
  EmbeddingSpec embedding;
};

/// Samples one of the Euclidean scenarios: x_i = gamma(t_i) + xi_1 v_1 + xi_2 v_2
/// with noise drawn in the normal space of the generating curve.
inline EuclideanSample gen_euclidean(const ScenarioSpec& spec) {
  spec.validate();
  if (!is_euclidean_case(spec.scenario))
    throw std::invalid_argument("gen_euclidean: spec is not a Euclidean case");

  double lo = 0.0, hi = 1.0;
  if (spec.scenario == ScenarioCase::EuclidCircle) hi = spec.strict_circle_interval ? 1.0 : 2.0 * kPi;
  if (spec.scenario == ScenarioCase::EuclidInvolute) hi = 6.0 * kPi;

  RandomStream t_stream = RandomStream::substream(spec.seed, 0);
  RandomStream xi1_stream = RandomStream::substream(spec.seed, 1);
  RandomStream xi2_stream = RandomStream::substream(spec.seed, 2);

  EuclideanSample sample;
  sample.t.resize(static_cast<std::size_t>(spec.n));
  sample.cloud.points.resize(spec.n, 3);
  sample.cloud.source = case_name(spec.scenario);

  for (Index i = 0; i < spec.n; ++i) {
    const double t = t_stream.uniform(lo, hi);
    const double xi1 = xi1_stream.normal(0.0, spec.sigma1);
    const double xi2 = xi2_stream.normal(0.0, spec.sigma2);
    Eigen::Vector3d base, v1, v2;
    switch (spec.scenario) {
      case ScenarioCase::EuclidLine:
        base = curves::euclid_line(t);
        v1 = {0.0, 1.0, 0.0};
        v2 = {0.0, 0.0, 1.0};
        break;
      case ScenarioCase::EuclidCircle:
        base = curves::euclid_circle(t);
        v1 = {0.0, 0.0, 1.0};
        v2 = {std::cos(t), std::sin(t), 0.0};
        break;
      default: {  // involute, rotating noise frame in the normal plane
        base = curves::euclid_involute(t);
        const curves::InvoluteFrame f = curves::euclid_involute_frame(t);
        v1 = std::sin(2.0 * t) * f.binormal + std::cos(2.0 * t) * f.normal;
        v2 = std::cos(2.0 * t) * f.binormal - std::sin(2.0 * t) * f.normal;
        break;
      }
    }
    sample.t[static_cast<std::size_t>(i)] = t;
    sample.cloud.points.row(i) = (base + xi1 * v1 + xi2 * v2).transpose();
  }
  return sample;
}

/// Samples one of the shape scenarios as noisy angle pairs:
/// (phi, psi) = gamma(t) + xi * n(t) with n the normalized second derivative,
/// falling back to the left unit normal of the velocity for the straight
/// angle curves whose second derivative vanishes identically.
inline ShapeSample gen_shape(const ScenarioSpec& spec) {
  spec.validate();
  if (is_euclidean_case(spec.scenario))
    throw std::invalid_argument("gen_shape: spec is not a shape case");

  double lo = 0.0, hi = 2.0 * kPi;
  if (spec.scenario == ScenarioCase::SphereInvolute) {
    lo = kPi / 2.0;
    hi = 9.0 * kPi / 2.0;
  } else if (spec.scenario == ScenarioCase::TorusInvolute) {
    lo = kPi / 2.0;
    hi = 19.0 * kPi / 2.0;
  }

  RandomStream t_stream = RandomStream::substream(spec.seed, 0);
  RandomStream xi_stream = RandomStream::substream(spec.seed, 1);

  ShapeSample sample;
  sample.embedding = case_embedding(spec.scenario);
  sample.t.resize(static_cast<std::size_t>(spec.n));
  sample.angles.resize(spec.n, 2);

  for (Index i = 0; i < spec.n; ++i) {
    const double t = t_stream.uniform(lo, hi);
    const double xi = xi_stream.normal(0.0, spec.sigma);
    Eigen::Vector2d base, dir;
    switch (spec.scenario) {
      case ScenarioCase::SphereCircle:
        base = curves::sphere_circle(t);
        dir = {0.0, 1.0};  // left normal of the constant velocity (1, 0)
        break;
      case ScenarioCase::SphereTennis: {
        base = curves::sphere_tennis(t);
        const Eigen::Vector2d d2 = curves::sphere_tennis_d2(t);
        if (d2.norm() < curves::kFrameDegenerateTol)
          throw FrameDegenerate("sphere tennis: second derivative vanishes at t = " +
                                std::to_string(t));
        dir = d2.normalized();
        break;
      }
      case ScenarioCase::SphereInvolute:
      case ScenarioCase::TorusInvolute: {
        base = curves::angle_involute(t);
        const Eigen::Vector2d d2 = curves::angle_involute_d2(t);
        if (d2.norm() < curves::kFrameDegenerateTol)
          throw FrameDegenerate("angle involute: second derivative vanishes at t = " +
                                std::to_string(t));
        dir = d2.normalized();
        break;
      }
      case ScenarioCase::TorusCircleMajor:
        base = {t, 0.0};
        dir = {0.0, 1.0};
        break;
      case ScenarioCase::TorusCircleMinor:
        base = {-2.0 * kPi / 3.0, t};
        dir = {-1.0, 0.0};  // left normal of the constant velocity (0, 1)
        break;
      default:
        throw std::invalid_argument("gen_shape: unknown case");
    }
    sample.t[static_cast<std::size_t>(i)] = t;
    sample.angles.row(i) = (base + xi * dir).transpose();
  }
  return sample;
}

}  // namespace pnsm
