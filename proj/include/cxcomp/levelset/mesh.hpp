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
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "cxcomp/types.hpp"

namespace cxcomp::levelset {

using Point2 = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

/// Conforming triangulation with counter-clockwise elements.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  double h = 0.0;  ///< max element diameter
  std::vector<int> boundary_vertices;

  [[nodiscard]] double element_area(std::size_t k) const;
  [[nodiscard]] double element_diameter(std::size_t k) const;
};

/// Uniform (n+1)^2 grid on the unit square, every cell cut along the diagonal
/// from its lower-left to its upper-right corner. h = sqrt(2)/n.
[[nodiscard]] TriMesh build_structured_mesh(int n);

/// Geometry of one P1 element, precomputed once per space.
struct ElementGeometry {
  double area;
  double diameter;
  std::array<Point2, 3> grad;  ///< gradients of the barycentric basis functions
};

/// Compressed sparsity pattern of the dof adjacency graph with, for every element,
/// the value slots of its 3x3 local block (row-major local order).
struct SparsityPattern {
  Eigen::SparseMatrix<Complex> skeleton;  ///< zero-valued matrix carrying the pattern
  std::vector<std::array<Eigen::Index, 9>> slots;
};

/// Continuous piecewise-linear Lagrange space (degree 1) over a mesh.
class FemSpace {
 public:
  /// Throws AssemblyError for degenerate elements and DomainError for degree != 1.
  explicit FemSpace(std::shared_ptr<const TriMesh> mesh, int degree = 1);

  [[nodiscard]] const TriMesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] std::shared_ptr<const TriMesh> mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t dof_count() const noexcept { return mesh_->vertices.size(); }
  [[nodiscard]] const std::vector<Point2>& dof_coordinates() const noexcept { return mesh_->vertices; }
  [[nodiscard]] const std::vector<ElementGeometry>& geometry() const noexcept { return geometry_; }
  [[nodiscard]] const SparsityPattern& pattern() const noexcept { return pattern_; }
  /// Outward unit normal at each boundary vertex (zero vector for interior ones).
  [[nodiscard]] const std::vector<Point2>& vertex_normals() const noexcept { return normals_; }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  int degree_;
  std::vector<ElementGeometry> geometry_;
  SparsityPattern pattern_;
  std::vector<Point2> normals_;
};

}  // namespace cxcomp::levelset
