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

#include "cxcomp/ode.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <Eigen/LU>

#include "cxcomp/errors.hpp"

namespace cxcomp {
namespace {

double inf_norm(const CVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void check_dimension(const OdeSystem& system, const CVector& y) {
  if (!system.rhs) {
    throw DomainError("ODE system has no right-hand side");
  }
  if (y.size() != system.dimension) {
    throw DomainError("state dimension " + std::to_string(y.size()) + " does not match system dimension " +
                      std::to_string(system.dimension));
  }
}

}  // namespace

CMatrix finite_difference_jacobian(const OdeSystem& system, Complex t, const CVector& y) {
  const int n = system.dimension;
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  CMatrix jac(n, n);
  CVector probe = y;
  for (int j = 0; j < n; ++j) {
    const double delta = root_eps * (1.0 + std::abs(y(j)));
    probe(j) = y(j) + delta;
    const CVector plus = system.rhs(t, probe);
    probe(j) = y(j) - delta;
    const CVector minus = system.rhs(t, probe);
    probe(j) = y(j);
    jac.col(j) = (plus - minus) / (2.0 * delta);
  }
  return jac;
}

CVector backward_euler_step(const OdeSystem& system, Complex t, const CVector& y, Complex h,
                            const NewtonSettings& settings, NewtonReport* report) {
  check_dimension(system, y);
  const Complex t_next = t + h;
  CVector z = y;
  CVector r = z - y - h * system.rhs(t_next, z);
  double res = inf_norm(r);
  int iterations = 0;
  while (!(res < settings.tolerance * (1.0 + inf_norm(z)))) {
    if (!std::isfinite(res)) {
      throw StepFailure("backward Euler: non-finite Newton residual", res);
    }
    if (iterations == settings.max_iterations) {
      std::ostringstream msg;
      msg << "backward Euler: Newton did not converge in " << settings.max_iterations
          << " iterations (residual " << res << ")";
      throw StepFailure(msg.str(), res);
    }
    const CMatrix jac = system.jacobian ? system.jacobian(t_next, z) : finite_difference_jacobian(system, t_next, z);
    const CMatrix newton = CMatrix::Identity(system.dimension, system.dimension) - h * jac;
    const Eigen::FullPivLU<CMatrix> lu(newton);
    if (!lu.isInvertible()) {
      throw LinearSolveError("backward Euler: singular Newton matrix");
    }
    z -= lu.solve(r);
    ++iterations;
    r = z - y - h * system.rhs(t_next, z);
    res = inf_norm(r);
  }
  if (report != nullptr) {
    report->iterations = iterations;
    report->residual = res;
  }
  return z;
}

CVector heun_step(const OdeSystem& system, Complex t, const CVector& y, Complex h) {
  check_dimension(system, y);
  const CVector k1 = system.rhs(t, y);
  const CVector k2 = system.rhs(t + h, y + h * k1);
  return y + (0.5 * h) * (k1 + k2);
}

BackwardEulerFlow::BackwardEulerFlow(OdeSystem system, NewtonSettings settings, std::string label)
    : system_(std::move(system)), settings_(settings), label_(std::move(label)) {}

CVector BackwardEulerFlow::advance(Complex t, const CVector& y, Complex h, const MacroStep&) const {
  NewtonReport report;
  CVector out = backward_euler_step(system_, t, y, h, settings_, &report);
  solves_.fetch_add(1, std::memory_order_relaxed);
  iterations_.fetch_add(static_cast<std::uint64_t>(report.iterations), std::memory_order_relaxed);
  return out;
}

HeunFlow::HeunFlow(OdeSystem system, std::string label) : system_(std::move(system)), label_(std::move(label)) {}

CVector HeunFlow::advance(Complex t, const CVector& y, Complex h, const MacroStep&) const {
  return heun_step(system_, t, y, h);
}

RVector propagate(const FlowStep& flow, const RVector& y0, double t0, double t_end, int steps,
                  const StepObserver& observer, double* seconds) {
  if (steps < 1) {
    throw DomainError("integration needs at least one step");
  }
  const double dt = (t_end - t0) / steps;
  if (observer) {
    observer(t0, y0);
  }
  const auto start = std::chrono::steady_clock::now();
  RVector y = y0;
  for (int n = 1; n <= steps; ++n) {
    const double t_prev = t0 + (n - 1) * dt;
    try {
      y = macro_step(flow, t_prev, y, dt);
    } catch (const StepFailure& e) {
      throw StepFailure(std::string(e.what()) + " at step " + std::to_string(n), e.last_residual(), n);
    } catch (const Error& e) {
      throw StepFailure(std::string(e.what()) + " at step " + std::to_string(n),
                        std::numeric_limits<double>::quiet_NaN(), n);
    }
    if (!y.allFinite()) {
      throw StepFailure("non-finite state at step " + std::to_string(n), std::numeric_limits<double>::infinity(), n);
    }
    if (observer) {
      observer(t0 + n * dt, y);
    }
  }
  if (seconds != nullptr) {
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return y;
}

TrajectoryRecord integrate(const FlowStep& flow, const RVector& y0, double t0, double t_end, int steps,
                           const StepObserver& observer) {
  TrajectoryRecord record;
  if (steps >= 1) {
    record.times.reserve(static_cast<std::size_t>(steps) + 1);
    record.states.reserve(static_cast<std::size_t>(steps) + 1);
  }
  const auto store = [&](double t, const RVector& y) {
    record.times.push_back(t);
    record.states.push_back(y);
    if (observer) {
      observer(t, y);
    }
  };
  (void)propagate(flow, y0, t0, t_end, steps, store, &record.wall_clock_seconds);
  return record;
}

}  // namespace cxcomp
