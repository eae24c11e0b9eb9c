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

#include "cxcomp/levelset/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cxcomp/errors.hpp"

namespace cxcomp::levelset {
namespace {

double box_distance(const Point2& p, const Point2& center, const Point2& half) {
  const Point2 d = (p - center).cwiseAbs() - half;
  const double outside = d.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(d.x(), d.y()), 0.0);
  return outside + inside;
}

}  // namespace

VelocityField vortex_velocity(double period) {
  if (!(period > 0.0)) {
    throw DomainError("vortex period must be positive");
  }
  VelocityField field;
  field.label = "vortex";
  field.time_dependent = true;
  field.spatial = [](const Point2& x) {
    constexpr double pi = std::numbers::pi;
    const double sx = std::sin(pi * x.x());
    const double sy = std::sin(pi * x.y());
    const double cx = std::cos(pi * x.x());
    const double cy = std::cos(pi * x.y());
    return Velocity2{Complex(-2.0 * sx * sx * sy * cy, 0.0), Complex(2.0 * sy * sy * sx * cx, 0.0)};
  };
  field.time_factor = [period](Complex t) { return std::cos(std::numbers::pi * t / period); };
  field.evaluate = [spatial = field.spatial, factor = field.time_factor](Complex t, const Point2& x) {
    const Velocity2 s = spatial(x);
    const Complex g = factor(t);
    return Velocity2{s[0] * g, s[1] * g};
  };
  return field;
}

VelocityField rigid_rotation(double period, const Point2& center) {
  if (!(period > 0.0)) {
    throw DomainError("rotation period must be positive");
  }
  const double omega = 2.0 * std::numbers::pi / period;
  VelocityField field;
  field.label = "rotation";
  field.time_dependent = false;
  field.evaluate = [omega, center](Complex, const Point2& x) {
    return Velocity2{Complex(omega * (center.y() - x.y()), 0.0), Complex(omega * (x.x() - center.x()), 0.0)};
  };
  return field;
}

VelocityField uniform_velocity(const Point2& u) {
  VelocityField field;
  field.label = "uniform";
  field.time_dependent = false;
  field.evaluate = [u](Complex, const Point2&) { return Velocity2{Complex(u.x(), 0.0), Complex(u.y(), 0.0)}; };
  return field;
}

ScalarField signed_distance_circle(const Point2& center, double radius) {
  if (!(radius > 0.0)) {
    throw DomainError("circle radius must be positive");
  }
  return [center, radius](const Point2& x) { return (x - center).norm() - radius; };
}

ScalarField slotted_disk_distance(const SlottedDisk& disk) {
  const double bottom = disk.center.y() - 2.0 * disk.radius;
  const Point2 slot_center(disk.center.x(), 0.5 * (bottom + disk.slot_top));
  const Point2 slot_half(0.5 * disk.slot_width, 0.5 * (disk.slot_top - bottom));
  return [disk, slot_center, slot_half](const Point2& x) {
    const double in_disk = (x - disk.center).norm() - disk.radius;
    const double in_slot = box_distance(x, slot_center, slot_half);
    return std::max(in_disk, -in_slot);
  };
}

ZalesakSetup zalesak_setup(double period) {
  ZalesakSetup setup;
  setup.velocity = rigid_rotation(period);
  setup.velocity.label = "zalesak";
  setup.initial = slotted_disk_distance(setup.disk);
  return setup;
}

RVector interpolate(const FemSpace& space, const ScalarField& phi) {
  const auto& xs = space.dof_coordinates();
  RVector out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = phi(xs[i]);
  }
  return out;
}

}  // namespace cxcomp::levelset
