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

#include "cxcomp/lotka_volterra.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "cxcomp/errors.hpp"
#include "format.hpp"

namespace cxcomp {
namespace {

using Point = std::array<double, 2>;

Point lv_field(const LotkaVolterraParams& p, const Point& y) {
  return {p.alpha * y[0] - p.beta * y[0] * y[1], -p.delta * y[1] + p.gamma * y[0] * y[1]};
}

Point rk4(const LotkaVolterraParams& p, const Point& y, double h) {
  auto axpy = [](const Point& a, double s, const Point& b) { return Point{a[0] + s * b[0], a[1] + s * b[1]}; };
  const Point k1 = lv_field(p, y);
  const Point k2 = lv_field(p, axpy(y, 0.5 * h, k1));
  const Point k3 = lv_field(p, axpy(y, 0.5 * h, k2));
  const Point k4 = lv_field(p, axpy(y, h, k3));
  return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

bool same_params(const LotkaVolterraParams& a, const LotkaVolterraParams& b) {
  return a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.delta == b.delta && a.u0 == b.u0 &&
         a.v0 == b.v0;
}

double compute_period(const LotkaVolterraParams& p) {
  // The orbit leaves (u0, v0) with sign(u') fixed; it returns when u crosses u0
  // again in that same direction.
  const double h = 5e-4;
  const double direction = lv_field(p, {p.u0, p.v0})[0] < 0.0 ? -1.0 : 1.0;
  Point y{p.u0, p.v0};
  double t = 0.0;
  bool went_back = false;
  for (long k = 0; k < 100'000'000L; ++k) {
    const Point next = rk4(p, y, h);
    const double before = direction * (y[0] - p.u0);
    const double after = direction * (next[0] - p.u0);
    if (after < 0.0) {
      went_back = true;
    }
    if (went_back && before < 0.0 && after >= 0.0) {
      double lo = 0.0;
      double hi = h;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (direction * (rk4(p, y, mid)[0] - p.u0) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const Point ret = rk4(p, y, hi);
      if (std::abs(ret[0] - p.u0) > 1e-8 || std::abs(ret[1] - p.v0) > 1e-8) {
        throw DomainError("Lotka-Volterra orbit did not close within 1e-8");
      }
      return t + hi;
    }
    y = next;
    t += h;
  }
  throw DomainError("Lotka-Volterra orbit period not found");
}

}  // namespace

void LotkaVolterraParams::validate() const {
  if (!(alpha > 0 && beta > 0 && gamma > 0 && delta > 0 && u0 > 0 && v0 > 0)) {
    throw DomainError("Lotka-Volterra rates and initial populations must be strictly positive");
  }
}

RVector LotkaVolterraParams::initial_state() const { return RVector{{u0, v0}}; }

OdeSystem lv_system(const LotkaVolterraParams& params) {
  params.validate();
  OdeSystem sys;
  sys.dimension = 2;
  sys.rhs = [p = params](Complex, const CVector& y) {
    CVector f(2);
    f(0) = p.alpha * y(0) - p.beta * y(0) * y(1);
    f(1) = -p.delta * y(1) + p.gamma * y(0) * y(1);
    return f;
  };
  sys.jacobian = [p = params](Complex, const CVector& y) {
    CMatrix j(2, 2);
    j(0, 0) = p.alpha - p.beta * y(1);
    j(0, 1) = -p.beta * y(0);
    j(1, 0) = p.gamma * y(1);
    j(1, 1) = -p.delta + p.gamma * y(0);
    return j;
  };
  return sys;
}

double lv_invariant(const LotkaVolterraParams& params, double u, double v) {
  if (!(u > 0.0) || !(v > 0.0)) {
    throw DomainError("Lotka-Volterra invariant needs positive populations");
  }
  return params.beta * v + params.gamma * u - params.alpha * std::log(v) - params.delta * std::log(u);
}

InvariantErrorAccumulator::InvariantErrorAccumulator(LotkaVolterraParams params)
    : params_(params), f0_(lv_invariant(params, params.u0, params.v0)) {}

void InvariantErrorAccumulator::add(const RVector& s) {
  ++samples_;
  if (!(s(0) > 0.0) || !(s(1) > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive population at step " << samples_ << ": (" << s(0) << ", " << s(1) << ")";
    throw DomainError(msg.str());
  }
  const double d = f0_ - lv_invariant(params_, s(0), s(1));
  num_ += d * d;
  den_ += f0_ * f0_;
}

double InvariantErrorAccumulator::value() const {
  if (samples_ == 0) {
    throw DomainError("trajectory has no samples after the initial state");
  }
  return std::sqrt(num_ / den_);
}

double relative_invariant_error(const LotkaVolterraParams& params, const TrajectoryRecord& trajectory) {
  InvariantErrorAccumulator acc(params);
  for (std::size_t n = 1; n < trajectory.states.size(); ++n) {
    acc.add(trajectory.states[n]);
  }
  return acc.value();
}

double lv_period(const LotkaVolterraParams& params) {
  params.validate();
  static const double default_period = compute_period(LotkaVolterraParams{});
  if (same_params(params, LotkaVolterraParams{})) {
    return default_period;
  }
  return compute_period(params);
}

std::vector<double> roc(std::span<const double> errors, std::span<const double> dts) {
  if (errors.size() != dts.size() || errors.size() < 2) {
    throw DomainError("roc needs two equally long sequences of length >= 2");
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(dts[i] > 0.0)) {
      throw DomainError("roc needs strictly positive errors and step sizes");
    }
  }
  std::vector<double> rates;
  rates.reserve(errors.size() - 1);
  for (std::size_t l = 1; l < errors.size(); ++l) {
    rates.push_back(std::log10(errors[l] / errors[l - 1]) / std::log10(dts[l] / dts[l - 1]));
  }
  return rates;
}

ConvergenceTable ConvergenceTable::build(std::string scheme, std::span<const double> dts,
                                         std::span<const double> errors) {
  if (dts.size() != errors.size() || dts.empty()) {
    throw DomainError("convergence table needs matching non-empty columns");
  }
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (!(dts[i] < dts[i - 1])) {
      throw DomainError("convergence table step sizes must decrease strictly");
    }
  }
  ConvergenceTable table{std::move(scheme), {}};
  for (std::size_t i = 0; i < dts.size(); ++i) {
    ConvergenceRow row{dts[i], errors[i], std::nullopt};
    if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0) {
      row.roc = std::log10(errors[i] / errors[i - 1]) / std::log10(dts[i] / dts[i - 1]);
    }
    table.rows.push_back(row);
  }
  return table;
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << "dt,error,roc\n";
  for (const ConvergenceRow& row : rows) {
    out << detail::sci(row.dt) << ',' << detail::sci(row.error) << ',' << (row.roc ? detail::sci(*row.roc) : "--")
        << '\n';
  }
}

}  // namespace cxcomp
