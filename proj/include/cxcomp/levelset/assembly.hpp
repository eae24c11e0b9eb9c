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

#include <Eigen/SparseCore>

#include "cxcomp/levelset/fields.hpp"
#include "cxcomp/levelset/mesh.hpp"

namespace cxcomp::levelset {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct SupgParameters {
  double C = 0.5;
  double tol = 1e-10;
};

/// tau_K = C h_K / max(|u|_K, tol / h_K).
[[nodiscard]] double supg_tau(double h_K, double u_inf_K, double C, double tol);

/// Stabilized mass M_ij = int psi_j (psi_i + tau_K w.grad psi_i) and transport
/// K_ij = int (u.grad psi_j)(psi_i + tau_K w.grad psi_i).
struct FemOperators {
  SparseMatrix M;
  SparseMatrix K;
  double assembly_seconds = 0.0;
  double t = 0.0;
};

/// Streamline weighting w and tau_K are taken at the real `weighting_time`; the
/// transported velocity u in K at the (possibly complex) `transport_time`.
/// Element integrals use a degree-4 six-point rule; |u|_K is the max over its points.
struct AssemblyTimes {
  Complex transport_time;
  double weighting_time;
};

[[nodiscard]] SparseMatrix assemble_mass(const FemSpace& space, const VelocityField& velocity,
                                         double weighting_time, const SupgParameters& supg, int threads = 1);

[[nodiscard]] SparseMatrix assemble_transport(const FemSpace& space, const VelocityField& velocity,
                                              const AssemblyTimes& times, const SupgParameters& supg,
                                              int threads = 1);

/// Transport operator of a separable field with the time factor dropped: advection by
/// spatial(x), SUPG weighting by u(weighting_time). Throws AssemblyError when the
/// field is not separable.
[[nodiscard]] SparseMatrix assemble_transport_shape(const FemSpace& space, const VelocityField& velocity,
                                                    double weighting_time, const SupgParameters& supg,
                                                    int threads = 1);

/// Both operators with every velocity evaluation at real time t.
[[nodiscard]] FemOperators assemble_operators(const FemSpace& space, const VelocityField& velocity, double t,
                                              const SupgParameters& supg = {}, int threads = 1);

}  // namespace cxcomp::levelset
