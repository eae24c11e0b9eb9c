/*
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

#include <array>
#include <functional>
#include <string>

#include "cxcomp/levelset/mesh.hpp"
#include "cxcomp/types.hpp"

namespace cxcomp::levelset {

using Velocity2 = std::array<Complex, 2>;

/// Advection velocity u(t, x), holomorphic in t so it can be evaluated at complex
/// substep times.
struct VelocityField {
  std::function<Velocity2(Complex t, const Point2& x)> evaluate;
  bool time_dependent = true;
  std::string label;
  /// Optional split u(t, x) = time_factor(t) spatial(x). When both are set the
  /// transport matrix is assembled once per weighting time and rescaled.
  std::function<Complex(Complex t)> time_factor;
  std::function<Velocity2(const Point2& x)> spatial;

  [[nodiscard]] bool separable() const noexcept { return time_factor && spatial; }
};

using ScalarField = std::function<double(const Point2&)>;

/// Reversible vortex on the unit square:
/// u = (-2 sin^2(pi x) sin(pi y) cos(pi y), 2 sin^2(pi y) sin(pi x) cos(pi x)) cos(pi t / T).
[[nodiscard]] VelocityField vortex_velocity(double period);

/// Rigid rotation omega (c_y - y, x - c_x), omega = 2 pi / T.
[[nodiscard]] VelocityField rigid_rotation(double period, const Point2& center = Point2(0.5, 0.5));

[[nodiscard]] VelocityField uniform_velocity(const Point2& u);

/// |x - center| - R; negative inside the circle.
[[nodiscard]] ScalarField signed_distance_circle(const Point2& center, double radius);

/// Zalesak's slotted disk in unit-square scaling. The slot is cut from below the
/// disk up to `slot_top`.
struct SlottedDisk {
  Point2 center{0.5, 0.75};
  double radius = 0.15;
  double slot_width = 0.05;
  double slot_top = 0.85;
};

/// max(disk distance, -slot distance): exact signed distance away from the slot corners.
[[nodiscard]] ScalarField slotted_disk_distance(const SlottedDisk& disk = {});

struct ZalesakSetup {
  VelocityField velocity;
  ScalarField initial;
  SlottedDisk disk;
};

/// Rigid rotation about (0.5, 0.5) with one revolution per `period`, plus the slotted disk.
[[nodiscard]] ZalesakSetup zalesak_setup(double period);

/// Nodal interpolant pi_h phi.
[[nodiscard]] RVector interpolate(const FemSpace& space, const ScalarField& phi);

}  // namespace cxcomp::levelset
