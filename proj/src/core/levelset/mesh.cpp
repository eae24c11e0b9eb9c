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

#include "cxcomp/levelset/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "cxcomp/errors.hpp"

namespace cxcomp::levelset {

double TriMesh::element_area(std::size_t k) const {
  const Triangle& t = triangles.at(k);
  const Point2 e1 = vertices[t[1]] - vertices[t[0]];
  const Point2 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * (e1.x() * e2.y() - e2.x() * e1.y());
}

double TriMesh::element_diameter(std::size_t k) const {
  const Triangle& t = triangles.at(k);
  return std::max({(vertices[t[1]] - vertices[t[0]]).norm(), (vertices[t[2]] - vertices[t[1]]).norm(),
                   (vertices[t[0]] - vertices[t[2]]).norm()});
}

TriMesh build_structured_mesh(int n) {
  if (n < 1) {
    throw DomainError("structured mesh needs n >= 1 subdivisions, got " + std::to_string(n));
  }
  TriMesh mesh;
  const int side = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(side) * side);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
      if (i == 0 || j == 0 || i == n || j == n) {
        mesh.boundary_vertices.push_back(j * side + i);
      }
    }
  }
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * side + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + side;
      const int v11 = v01 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  mesh.h = std::sqrt(2.0) / n;
  return mesh;
}

FemSpace::FemSpace(std::shared_ptr<const TriMesh> mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) {
    throw DomainError("FemSpace needs a mesh");
  }
  if (degree_ != 1) {
    throw DomainError("only P1 (degree 1) elements are supported");
  }
  const TriMesh& m = *mesh_;
  const auto n_dofs = static_cast<Eigen::Index>(m.vertices.size());

  geometry_.reserve(m.triangles.size());
  for (std::size_t k = 0; k < m.triangles.size(); ++k) {
    const Triangle& t = m.triangles[k];
    for (int v : t) {
      if (v < 0 || v >= n_dofs) {
        throw AssemblyError("triangle " + std::to_string(k) + " references a missing vertex");
      }
    }
    const Point2& p0 = m.vertices[t[0]];
    const Point2& p1 = m.vertices[t[1]];
    const Point2& p2 = m.vertices[t[2]];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (0.5 * det < 1e-14) {
      throw AssemblyError("degenerate or clockwise element " + std::to_string(k));
    }
    ElementGeometry g;
    g.area = 0.5 * det;
    g.diameter = m.element_diameter(k);
    g.grad[0] = Point2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    g.grad[1] = Point2(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    g.grad[2] = Point2(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    geometry_.push_back(g);
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(9 * m.triangles.size());
  for (const Triangle& t : m.triangles) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        triplets.emplace_back(t[a], t[b], Complex(0.0, 0.0));
      }
    }
  }
  pattern_.skeleton.resize(n_dofs, n_dofs);
  pattern_.skeleton.setFromTriplets(triplets.begin(), triplets.end());
  pattern_.skeleton.makeCompressed();

  const auto* outer = pattern_.skeleton.outerIndexPtr();
  const auto* inner = pattern_.skeleton.innerIndexPtr();
  pattern_.slots.reserve(m.triangles.size());
  for (const Triangle& t : m.triangles) {
    std::array<Eigen::Index, 9> slot{};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const int row = t[a];
        const int col = t[b];
        const auto* first = inner + outer[col];
        const auto* last = inner + outer[col + 1];
        const auto* it = std::lower_bound(first, last, row);
        slot[3 * a + b] = static_cast<Eigen::Index>(it - inner);
      }
    }
    pattern_.slots.push_back(slot);
  }

  // Boundary edges are the ones owned by a single element; with counter-clockwise
  // elements the outward normal of edge (a -> b) is (dy, -dx).
  std::map<std::pair<int, int>, int> edge_count;
  for (const Triangle& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  normals_.assign(m.vertices.size(), Point2::Zero());
  for (const Triangle& t : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[e];
      const int b = t[(e + 1) % 3];
      if (edge_count[{std::min(a, b), std::max(a, b)}] != 1) {
        continue;
      }
      const Point2 d = m.vertices[b] - m.vertices[a];
      const Point2 nrm = Point2(d.y(), -d.x()).normalized();
      normals_[a] += nrm;
      normals_[b] += nrm;
    }
  }
  for (Point2& nrm : normals_) {
    if (nrm.squaredNorm() > 0.0) {
      nrm.normalize();
    }
  }
}

}  // namespace cxcomp::levelset
