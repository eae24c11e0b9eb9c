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

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cxcomp/levelset/mesh.hpp"

namespace cxcomp::levelset {

/// (int (phi_h - ref)^2)^{1/2} for P1 fields; exact element quadrature.
[[nodiscard]] double l2_error(const FemSpace& space, const RVector& state, const RVector& reference);

struct Segment {
  Point2 a;
  Point2 b;
};

struct InterfaceMeasures {
  double area = 0.0;  ///< |{phi < 0}|, exact for the P1 interpolant
  std::vector<Segment> contour;

  [[nodiscard]] double contour_length() const;
};

/// Area of {phi < 0} by per-triangle linear cuts and the zero contour by marching triangles.
[[nodiscard]] InterfaceMeasures interface_measures(const FemSpace& space, const RVector& phi);

/// |{phi_a < 0} symmetric-difference {phi_b < 0}| for two P1 fields on the same space.
[[nodiscard]] double symmetric_difference_area(const FemSpace& space, const RVector& phi_a, const RVector& phi_b);

/// Legacy ASCII VTK unstructured grid with point scalars (one SCALARS block each).
void write_vtk(std::ostream& out, const TriMesh& mesh,
               const std::vector<std::pair<std::string, const RVector*>>& point_scalars,
               const std::string& title = "cxcomp level set");

/// Contour segments as CSV `x0,y0,x1,y1`.
void write_contour_csv(std::ostream& out, const std::vector<Segment>& contour);

}  // namespace cxcomp::levelset
