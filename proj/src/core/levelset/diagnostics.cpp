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

#include "cxcomp/levelset/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "cxcomp/errors.hpp"
#include "../format.hpp"

namespace cxcomp::levelset {
namespace {

struct CutVertex {
  Point2 p;
  std::array<double, 2> f;  // two linear fields carried along the clip
};

using Polygon = std::vector<CutVertex>;

// Keeps the part of a convex polygon where field `which` is negative.
Polygon clip_negative(const Polygon& poly, int which) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const CutVertex& a = poly[i];
    const CutVertex& b = poly[(i + 1) % n];
    const bool in_a = a.f[which] < 0.0;
    const bool in_b = b.f[which] < 0.0;
    if (in_a != in_b) {
      const double s = a.f[which] / (a.f[which] - b.f[which]);
      out.push_back({a.p + s * (b.p - a.p), {a.f[0] + s * (b.f[0] - a.f[0]), a.f[1] + s * (b.f[1] - a.f[1])}});
    }
    if (in_b) {
      out.push_back(b);
    }
  }
  return out;
}

double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i].p;
    const Point2& b = poly[(i + 1) % poly.size()].p;
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(twice);
}

Polygon element_polygon(const TriMesh& mesh, const Triangle& tri, const RVector& fa, const RVector& fb) {
  Polygon poly;
  for (int v : tri) {
    poly.push_back({mesh.vertices[static_cast<std::size_t>(v)], {fa(v), fb(v)}});
  }
  return poly;
}

void check_size(const FemSpace& space, const RVector& v, const char* what) {
  if (v.size() != static_cast<Eigen::Index>(space.dof_count())) {
    throw DomainError(std::string(what) + ": vector length does not match the space");
  }
}

}  // namespace

double l2_error(const FemSpace& space, const RVector& state, const RVector& reference) {
  check_size(space, state, "l2_error");
  check_size(space, reference, "l2_error");
  const RVector e = state - reference;
  const TriMesh& mesh = space.mesh();
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const Triangle& t = mesh.triangles[k];
    const double e0 = e(t[0]);
    const double e1 = e(t[1]);
    const double e2 = e(t[2]);
    // int_K (sum e_i lambda_i)^2 = |K|/12 (2 sum e_i^2 + 2 sum_{i<j} e_i e_j)
    const double s = e0 + e1 + e2;
    sum += space.geometry()[k].area / 12.0 * (s * s + e0 * e0 + e1 * e1 + e2 * e2);
  }
  return std::sqrt(sum);
}

double InterfaceMeasures::contour_length() const {
  double total = 0.0;
  for (const Segment& s : contour) {
    total += (s.b - s.a).norm();
  }
  return total;
}

InterfaceMeasures interface_measures(const FemSpace& space, const RVector& phi) {
  check_size(space, phi, "interface_measures");
  const TriMesh& mesh = space.mesh();
  InterfaceMeasures out;
  for (const Triangle& tri : mesh.triangles) {
    const Polygon inside = clip_negative(element_polygon(mesh, tri, phi, phi), 0);
    if (inside.size() >= 3) {
      out.area += polygon_area(inside);
    }
    std::vector<Point2> crossings;
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      if ((phi(a) < 0.0) != (phi(b) < 0.0)) {
        const double s = phi(a) / (phi(a) - phi(b));
        const Point2& pa = mesh.vertices[static_cast<std::size_t>(a)];
        const Point2& pb = mesh.vertices[static_cast<std::size_t>(b)];
        crossings.push_back(pa + s * (pb - pa));
      }
    }
    if (crossings.size() == 2) {
      out.contour.push_back({crossings[0], crossings[1]});
    }
  }
  return out;
}

double symmetric_difference_area(const FemSpace& space, const RVector& phi_a, const RVector& phi_b) {
  check_size(space, phi_a, "symmetric_difference_area");
  check_size(space, phi_b, "symmetric_difference_area");
  const TriMesh& mesh = space.mesh();
  double total = 0.0;
  for (const Triangle& tri : mesh.triangles) {
    const Polygon poly = element_polygon(mesh, tri, phi_a, phi_b);
    const Polygon in_a = clip_negative(poly, 0);
    const Polygon in_b = clip_negative(poly, 1);
    const Polygon in_both = clip_negative(in_a, 1);
    const double area_a = in_a.size() >= 3 ? polygon_area(in_a) : 0.0;
    const double area_b = in_b.size() >= 3 ? polygon_area(in_b) : 0.0;
    const double area_ab = in_both.size() >= 3 ? polygon_area(in_both) : 0.0;
    total += area_a + area_b - 2.0 * area_ab;
  }
  return total;
}

void write_vtk(std::ostream& out, const TriMesh& mesh,
               const std::vector<std::pair<std::string, const RVector*>>& point_scalars, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Point2& p : mesh.vertices) {
    out << detail::sig17(p.x()) << ' ' << detail::sig17(p.y()) << " 0\n";
  }
  out << "CELLS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << '\n';
  for (const Triangle& t : mesh.triangles) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.triangles.size() << '\n';
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    out << "5\n";
  }
  out << "POINT_DATA " << mesh.vertices.size() << '\n';
  for (const auto& [name, values] : point_scalars) {
    if (values == nullptr || values->size() != static_cast<Eigen::Index>(mesh.vertices.size())) {
      throw DomainError("VTK point data '" + name + "' does not match the mesh");
    }
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < values->size(); ++i) {
      out << detail::sig17((*values)(i)) << '\n';
    }
  }
}

void write_contour_csv(std::ostream& out, const std::vector<Segment>& contour) {
  out << "x0,y0,x1,y1\n";
  for (const Segment& s : contour) {
    out << detail::sig17(s.a.x()) << ',' << detail::sig17(s.a.y()) << ',' << detail::sig17(s.b.x()) << ','
        << detail::sig17(s.b.y()) << '\n';
  }
}

}  // namespace cxcomp::levelset
