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

#include "cxcomp/levelset/assembly.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

#include "cxcomp/errors.hpp"

namespace cxcomp::levelset {
namespace {

// Six-point symmetric rule, exact for degree 4 (barycentric points, weights sum to 1).
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

constexpr double kA1 = 0.445948490915964886;
constexpr double kA2 = 0.091576213509770743;
constexpr double kW1 = 0.223381589678011466;
constexpr double kW2 = 1.0 / 3.0 - kW1;

constexpr std::array<QuadPoint, 6> kRule{{
    {{kA1, kA1, 1.0 - 2.0 * kA1}, kW1},
    {{kA1, 1.0 - 2.0 * kA1, kA1}, kW1},
    {{1.0 - 2.0 * kA1, kA1, kA1}, kW1},
    {{kA2, kA2, 1.0 - 2.0 * kA2}, kW2},
    {{kA2, 1.0 - 2.0 * kA2, kA2}, kW2},
    {{1.0 - 2.0 * kA2, kA2, kA2}, kW2},
}};

using LocalBlock = std::array<Complex, 9>;

enum class Operator { Mass, Transport, TransportShape };

template <class Fn>
void for_each_chunk(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2048) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t begin = 0; begin < count; begin += chunk) {
    pool.emplace_back([&fn, begin, end = std::min(count, begin + chunk)] { fn(begin, end); });
  }
}

SparseMatrix assemble(Operator op, const FemSpace& space, const VelocityField& velocity, const AssemblyTimes& times,
                      const SupgParameters& supg, int threads) {
  const TriMesh& mesh = space.mesh();
  const auto& geometry = space.geometry();
  const std::size_t n_el = mesh.triangles.size();
  std::vector<LocalBlock> blocks(n_el);
  const Complex weighting_time(times.weighting_time, 0.0);

  for_each_chunk(n_el, threads, [&](std::size_t begin, std::size_t end) {
    std::array<Point2, 6> w;
    std::array<Velocity2, 6> u;
    for (std::size_t k = begin; k < end; ++k) {
      const Triangle& tri = mesh.triangles[k];
      const ElementGeometry& g = geometry[k];
      double w_inf = 0.0;
      for (std::size_t q = 0; q < kRule.size(); ++q) {
        const auto& b = kRule[q].bary;
        const Point2 x = b[0] * mesh.vertices[tri[0]] + b[1] * mesh.vertices[tri[1]] + b[2] * mesh.vertices[tri[2]];
        const Velocity2 wq = velocity.evaluate(weighting_time, x);
        w[q] = Point2(wq[0].real(), wq[1].real());
        w_inf = std::max(w_inf, w[q].norm());
        if (op == Operator::Transport) {
          u[q] = velocity.evaluate(times.transport_time, x);
        } else if (op == Operator::TransportShape) {
          u[q] = velocity.spatial(x);
        }
      }
      const double tau = supg_tau(g.diameter, w_inf, supg.C, supg.tol);
      LocalBlock block{};
      for (std::size_t q = 0; q < kRule.size(); ++q) {
        const auto& b = kRule[q].bary;
        const double jw = g.area * kRule[q].weight;
        for (int i = 0; i < 3; ++i) {
          const double test = b[i] + tau * w[q].dot(g.grad[i]);
          for (int j = 0; j < 3; ++j) {
            if (op == Operator::Mass) {
              block[3 * i + j] += jw * b[j] * test;
            } else {
              const Complex adv = u[q][0] * g.grad[j].x() + u[q][1] * g.grad[j].y();
              block[3 * i + j] += jw * adv * test;
            }
          }
        }
      }
      blocks[k] = block;
    }
  });

  // Scatter in element order so the result does not depend on the thread count.
  SparseMatrix out = space.pattern().skeleton;
  Complex* values = out.valuePtr();
  const auto& slots = space.pattern().slots;
  for (std::size_t k = 0; k < n_el; ++k) {
    for (int s = 0; s < 9; ++s) {
      values[slots[k][s]] += blocks[k][s];
    }
  }
  return out;
}

}  // namespace

double supg_tau(double h_K, double u_inf_K, double C, double tol) { return C * h_K / std::max(u_inf_K, tol / h_K); }

SparseMatrix assemble_mass(const FemSpace& space, const VelocityField& velocity, double weighting_time,
                           const SupgParameters& supg, int threads) {
  return assemble(Operator::Mass, space, velocity, {Complex(weighting_time, 0.0), weighting_time}, supg, threads);
}

SparseMatrix assemble_transport(const FemSpace& space, const VelocityField& velocity, const AssemblyTimes& times,
                                const SupgParameters& supg, int threads) {
  return assemble(Operator::Transport, space, velocity, times, supg, threads);
}

SparseMatrix assemble_transport_shape(const FemSpace& space, const VelocityField& velocity, double weighting_time,
                                      const SupgParameters& supg, int threads) {
  if (!velocity.separable()) {
    throw AssemblyError("velocity field '" + velocity.label + "' is not separable");
  }
  return assemble(Operator::TransportShape, space, velocity, {Complex(weighting_time, 0.0), weighting_time}, supg,
                  threads);
}

FemOperators assemble_operators(const FemSpace& space, const VelocityField& velocity, double t,
                                const SupgParameters& supg, int threads) {
  const auto start = std::chrono::steady_clock::now();
  FemOperators ops;
  ops.M = assemble_mass(space, velocity, t, supg, threads);
  ops.K = assemble_transport(space, velocity, {Complex(t, 0.0), t}, supg, threads);
  ops.t = t;
  ops.assembly_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ops;
}

}  // namespace cxcomp::levelset
