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

#include "cxcomp/composition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "cxcomp/errors.hpp"

namespace cxcomp {
namespace {

Complex ipow(Complex a, int n) {
  Complex r(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    r *= a;
  }
  return r;
}

class ComposedFlow final : public FlowStep {
 public:
  ComposedFlow(FlowPtr base, CompositionSchedule schedule, std::string label)
      : base_(std::move(base)), schedule_(std::move(schedule)), label_(std::move(label)) {}

  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override {
    if (h == Complex(0.0, 0.0)) {
      return y;
    }
    CVector state = y;
    Complex time = t;
    for (const Complex& a : schedule_.coefficients()) {
      const Complex sub = a * h;
      state = base_->advance(time, state, sub, macro);
      time += sub;
    }
    return state;
  }

  int order() const noexcept override { return schedule_.claimed_order(); }
  std::string label() const override { return label_; }
  std::size_t base_applications() const noexcept override {
    return schedule_.coefficients().size() * base_->base_applications();
  }

 private:
  FlowPtr base_;
  CompositionSchedule schedule_;
  std::string label_;
};

class SymmetricAverageFlow final : public FlowStep {
 public:
  SymmetricAverageFlow(FlowPtr base, CoefficientPair pair, std::string label)
      : base_(std::move(base)), pair_(pair), label_(std::move(label)) {}

  CVector advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const override {
    if (h == Complex(0.0, 0.0)) {
      return y;
    }
    const Complex h1 = pair_.a1 * h;
    const Complex h2 = pair_.a2 * h;
    const CVector forward = base_->advance(t + h1, base_->advance(t, y, h1, macro), h2, macro);
    const CVector backward = base_->advance(t + h2, base_->advance(t, y, h2, macro), h1, macro);
    return 0.5 * (forward + backward);
  }

  int order() const noexcept override { return pair_.base_order + 2; }
  std::string label() const override { return label_; }
  std::size_t base_applications() const noexcept override { return 4 * base_->base_applications(); }

 private:
  FlowPtr base_;
  CoefficientPair pair_;
  std::string label_;
};

}  // namespace

BranchRange admissible_branches(int base_order) {
  if (base_order < 1) {
    throw DomainError("base order must be positive, got " + std::to_string(base_order));
  }
  if (base_order % 2 == 0) {
    return {-base_order / 2, base_order / 2 - 1};
  }
  return {-(base_order + 1) / 2, (base_order - 1) / 2};
}

CoefficientPair pair_coefficients(int base_order, int branch) {
  const BranchRange range = admissible_branches(base_order);
  if (!range.contains(branch)) {
    std::ostringstream msg;
    msg << "branch l=" << branch << " outside admissible range [" << range.lo << ", " << range.hi
        << "] for p=" << base_order;
    throw DomainError(msg.str());
  }
  const double theta = (2.0 * branch + 1.0) * std::numbers::pi / (base_order + 1.0);
  const double denom = 1.0 + std::cos(theta);
  if (std::abs(denom) < 1e-14) {
    throw SingularBranchError("1 + cos(theta) vanishes for p=" + std::to_string(base_order) +
                              ", l=" + std::to_string(branch));
  }
  const Complex a1(0.5, 0.5 * std::sin(theta) / denom);
  return {a1, std::conj(a1), base_order, branch};
}

ConditionResiduals validate_conditions(std::span<const Complex> coefficients, int base_order) {
  if (coefficients.empty()) {
    throw DomainError("validate_conditions needs at least one coefficient");
  }
  Complex sum(0.0, 0.0);
  Complex power(0.0, 0.0);
  for (const Complex& a : coefficients) {
    sum += a;
    power += ipow(a, base_order + 1);
  }
  return {std::abs(sum - 1.0), std::abs(power)};
}

std::array<double, 3> triple_jump_coefficients(int base_order) {
  if (base_order < 1 || base_order % 2 != 0) {
    throw DomainError("triple jump has no real solution for odd order p=" + std::to_string(base_order));
  }
  const double outer = 1.0 / (2.0 - std::pow(2.0, 1.0 / (base_order + 1.0)));
  return {outer, 1.0 - 2.0 * outer, outer};
}

CompositionSchedule::CompositionSchedule(std::vector<Complex> coefficients, int base_order,
                                         int claimed_order)
    : coefficients_(std::move(coefficients)), base_order_(base_order), claimed_order_(claimed_order) {
  if (base_order_ < 1) {
    throw DomainError("schedule base order must be positive");
  }
  if (claimed_order_ < base_order_) {
    throw DomainError("claimed order below base order");
  }
  const ConditionResiduals res = validate_conditions(coefficients_, base_order_);
  if (res.sum > kSumTolerance) {
    std::ostringstream msg;
    msg << "composition coefficients sum to 1 only within " << res.sum;
    throw DomainError(msg.str());
  }
  if (claimed_order_ == base_order_ + 1 && res.power > kPowerTolerance) {
    std::ostringstream msg;
    msg << "order condition sum a^" << base_order_ + 1 << " = 0 violated by " << res.power;
    throw DomainError(msg.str());
  }
  if (claimed_order_ > base_order_ + 1) {
    // Multi-level claims are only produced by recursive(); verify each level there.
    throw DomainError("a single schedule can raise the order by at most one");
  }
}

CompositionSchedule CompositionSchedule::conjugate_pair(const CoefficientPair& pair) {
  return CompositionSchedule({pair.a1, pair.a2}, pair.base_order, pair.base_order + 1);
}

CompositionSchedule CompositionSchedule::triple_jump(int base_order) {
  const auto a = triple_jump_coefficients(base_order);
  return CompositionSchedule({a[0], a[1], a[2]}, base_order, base_order + 1);
}

CompositionSchedule CompositionSchedule::recursive(int base_order, int target_order,
                                                   const BranchPolicy& policy) {
  if (target_order < base_order) {
    throw DomainError("target order below base order");
  }
  std::vector<Complex> flat{Complex(1.0, 0.0)};
  for (int p = base_order; p < target_order; ++p) {
    const CoefficientPair pair = pair_coefficients(p, policy(p));
    std::vector<Complex> next;
    next.reserve(2 * flat.size());
    for (const Complex& outer : {pair.a1, pair.a2}) {
      for (const Complex& inner : flat) {
        next.push_back(outer * inner);
      }
    }
    flat = std::move(next);
  }
  CompositionSchedule schedule({Complex(1.0, 0.0)}, base_order, base_order);
  const ConditionResiduals res = validate_conditions(flat, base_order);
  if (res.sum > kSumTolerance) {
    throw DomainError("recursive schedule does not sum to one");
  }
  schedule.coefficients_ = std::move(flat);
  schedule.claimed_order_ = target_order;
  return schedule;
}

FlowPtr compose(FlowPtr base, CompositionSchedule schedule, std::string label) {
  if (!base) {
    throw DomainError("compose: null base flow");
  }
  if (schedule.base_order() != base->order()) {
    throw DomainError("compose: schedule built for order " + std::to_string(schedule.base_order()) +
                      " but base flow has order " + std::to_string(base->order()));
  }
  if (label.empty()) {
    label = base->label() + "^" + std::to_string(schedule.coefficients().size());
  }
  return std::make_shared<ComposedFlow>(std::move(base), std::move(schedule), std::move(label));
}

FlowPtr recursive_composition(FlowPtr base, int target_order, const BranchPolicy& policy,
                              std::string label) {
  if (!base) {
    throw DomainError("recursive_composition: null base flow");
  }
  if (target_order < base->order()) {
    throw DomainError("recursive_composition: target order below base order");
  }
  FlowPtr current = std::move(base);
  for (int p = current->order(); p < target_order; ++p) {
    std::string level_label = p + 1 == target_order ? label : std::string{};
    current = compose(current, CompositionSchedule::conjugate_pair(pair_coefficients(p, policy(p))),
                      std::move(level_label));
  }
  return current;
}

FlowPtr symmetric_average(FlowPtr base, const CoefficientPair& pair, std::string label) {
  if (!base) {
    throw DomainError("symmetric_average: null base flow");
  }
  if (pair.base_order != base->order()) {
    throw DomainError("symmetric_average: pair built for a different base order");
  }
  if (label.empty()) {
    label = base->label() + "-SYM";
  }
  return std::make_shared<SymmetricAverageFlow>(std::move(base), pair, std::move(label));
}

Complex base_stability(BaseScheme scheme, Complex z) {
  switch (scheme) {
    case BaseScheme::BackwardEuler: {
      const Complex den = 1.0 - z;
      if (std::abs(den) < 1e-14) {
        return {std::numeric_limits<double>::infinity(), 0.0};
      }
      return 1.0 / den;
    }
    case BaseScheme::Heun:
      return 1.0 + z + 0.5 * z * z;
  }
  return {std::numeric_limits<double>::quiet_NaN(), 0.0};
}

StabilitySample stability_function(BaseScheme scheme, std::span<const Complex> coefficients, Complex z) {
  StabilitySample s{z, Complex(1.0, 0.0), true, false};
  if (coefficients.empty()) {
    s.value = base_stability(scheme, z);
    s.bounded = std::isfinite(s.value.real());
  } else {
    for (const Complex& a : coefficients) {
      const Complex factor = base_stability(scheme, a * z);
      if (!std::isfinite(factor.real())) {
        s.bounded = false;
        s.value = factor;
        break;
      }
      s.value *= factor;
    }
  }
  s.in_region = s.bounded && std::abs(s.value) <= 1.0;
  return s;
}

}  // namespace cxcomp
