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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cxcomp/composition.hpp"
#include "cxcomp/errors.hpp"

namespace {

using cxcomp::Complex;
using cxcomp::CVector;
using cxcomp::FlowPtr;
using cxcomp::MacroStep;
using cxcomp::RVector;

// Closed-form one-step maps on y' = lambda y, written independently of the library integrators.
class LinearBackwardEuler final : public cxcomp::FlowStep {
 public:
  explicit LinearBackwardEuler(double lambda) : lambda_(lambda) {}
  CVector advance(Complex, const CVector& y, Complex h, const MacroStep&) const override {
    return y / (1.0 - h * lambda_);
  }
  int order() const noexcept override { return 1; }
  std::string label() const override { return "BE1"; }

 private:
  double lambda_;
};

class LinearHeun final : public cxcomp::FlowStep {
 public:
  explicit LinearHeun(double lambda) : lambda_(lambda) {}
  CVector advance(Complex, const CVector& y, Complex h, const MacroStep&) const override {
    const Complex z = h * lambda_;
    return y * (1.0 + z + 0.5 * z * z);
  }
  int order() const noexcept override { return 2; }
  std::string label() const override { return "HM1"; }

 private:
  double lambda_;
};

double error_at_one(const cxcomp::FlowStep& flow, int steps) {
  RVector y = RVector::Constant(1, 1.0);
  const double dt = 1.0 / steps;
  for (int n = 0; n < steps; ++n) {
    y = cxcomp::macro_step(flow, n * dt, y, dt);
  }
  return std::abs(y(0) - std::exp(-1.0));
}

double observed_rate(const cxcomp::FlowStep& flow, int n_coarse) {
  const double e1 = error_at_one(flow, n_coarse);
  const double e2 = error_at_one(flow, 2 * n_coarse);
  return std::log2(e1 / e2);
}

}  // namespace

TEST(PairCoefficients, FirstOrderPair) {
  const auto pair = cxcomp::pair_coefficients(1, 0);
  EXPECT_NEAR(pair.a1.real(), 0.5, 1e-15);
  EXPECT_NEAR(pair.a1.imag(), 0.5, 1e-15);
  EXPECT_NEAR(pair.a2.real(), 0.5, 1e-15);
  EXPECT_NEAR(pair.a2.imag(), -0.5, 1e-15);
}

TEST(PairCoefficients, SecondOrderPair) {
  const auto pair = cxcomp::pair_coefficients(2, 0);
  const Complex expected = Complex(3.0, std::sqrt(3.0)) / 6.0;
  EXPECT_NEAR(std::abs(pair.a1 - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pair.a2 - std::conj(expected)), 0.0, 1e-15);
}

TEST(PairCoefficients, ThirdOrderPairIsHalfTanPiOverEight) {
  const auto pair = cxcomp::pair_coefficients(3, 0);
  EXPECT_NEAR(pair.a1.real(), 0.5, 1e-15);
  EXPECT_NEAR(pair.a1.imag(), 0.5 * std::tan(std::numbers::pi / 8.0), 1e-15);
  EXPECT_NEAR(pair.a1.imag(), 0.2071068, 1e-7);
}

TEST(PairCoefficients, AdmissibleRanges) {
  EXPECT_EQ(cxcomp::admissible_branches(2).lo, -1);
  EXPECT_EQ(cxcomp::admissible_branches(2).hi, 0);
  EXPECT_EQ(cxcomp::admissible_branches(3).lo, -2);
  EXPECT_EQ(cxcomp::admissible_branches(3).hi, 1);
  EXPECT_EQ(cxcomp::admissible_branches(6).lo, -3);
  EXPECT_EQ(cxcomp::admissible_branches(6).hi, 2);
}

TEST(PairCoefficients, AllAdmissibleBranchesSatisfyConditions) {
  for (int p = 1; p <= 6; ++p) {
    const auto range = cxcomp::admissible_branches(p);
    for (int l = range.lo; l <= range.hi; ++l) {
      const auto pair = cxcomp::pair_coefficients(p, l);
      EXPECT_NEAR(std::abs(pair.a2 - std::conj(pair.a1)), 0.0, 1e-15) << p << "," << l;
      // Independent check of the power condition with std::pow.
      EXPECT_LT(std::abs(std::pow(pair.a1, p + 1) + std::pow(pair.a2, p + 1)), 1e-13) << p << "," << l;
      const Complex c[2] = {pair.a1, pair.a2};
      const auto res = cxcomp::validate_conditions(c, p);
      EXPECT_LT(res.sum, 1e-13);
      EXPECT_LT(res.power, 1e-13);
    }
  }
}

TEST(PairCoefficients, OutOfRangeBranchIsDomainError) {
  EXPECT_THROW((void)cxcomp::pair_coefficients(2, 5), cxcomp::DomainError);
  EXPECT_THROW((void)cxcomp::pair_coefficients(2, 1), cxcomp::DomainError);
  EXPECT_THROW((void)cxcomp::pair_coefficients(0, 0), cxcomp::DomainError);
}

TEST(ValidateConditions, SingleFullStep) {
  const Complex c[1] = {Complex(1.0, 0.0)};
  const auto res = cxcomp::validate_conditions(c, 1);
  EXPECT_EQ(res.sum, 0.0);
  EXPECT_EQ(res.power, 1.0);
}

TEST(ValidateConditions, FirstOrderPairIsExact) {
  const Complex c[2] = {Complex(0.5, 0.5), Complex(0.5, -0.5)};
  const auto res = cxcomp::validate_conditions(c, 1);
  EXPECT_LE(res.sum, 1e-15);
  EXPECT_LE(res.power, 1e-15);
}

TEST(TripleJump, SecondOrder) {
  const auto tj = cxcomp::triple_jump_coefficients(2);
  EXPECT_NEAR(tj[0], 1.3512071919, 1e-10);
  EXPECT_NEAR(tj[1], -1.7024143839, 1e-10);
  EXPECT_NEAR(tj[2], 1.3512071919, 1e-10);
  EXPECT_LT(tj[1], 0.0);
  const Complex c[3] = {tj[0], tj[1], tj[2]};
  const auto res = cxcomp::validate_conditions(c, 2);
  EXPECT_LT(res.sum, 1e-13);
  EXPECT_LT(res.power, 1e-13);
}

TEST(TripleJump, FourthOrder) {
  const auto tj = cxcomp::triple_jump_coefficients(4);
  EXPECT_NEAR(tj[0], 1.0 / (2.0 - std::pow(2.0, 0.2)), 1e-15);
  EXPECT_NEAR(tj[0], 1.1746717581, 1e-10);
  EXPECT_NEAR(tj[0] + tj[1] + tj[2], 1.0, 1e-15);
  EXPECT_LT(std::abs(2.0 * std::pow(tj[0], 5) + std::pow(tj[1], 5)), 1e-12);
}

TEST(TripleJump, OddOrderHasNoRealSolution) {
  EXPECT_THROW((void)cxcomp::triple_jump_coefficients(3), cxcomp::DomainError);
}

TEST(CompositionSchedule, RejectsInvalidCoefficients) {
  EXPECT_THROW(cxcomp::CompositionSchedule({Complex(0.5, 0.0), Complex(0.6, 0.0)}, 1, 1), cxcomp::DomainError);
  // Sums to one but does not raise the order.
  EXPECT_THROW(cxcomp::CompositionSchedule({Complex(0.25, 0.0), Complex(0.75, 0.0)}, 1, 2), cxcomp::DomainError);
  EXPECT_NO_THROW(cxcomp::CompositionSchedule({Complex(0.25, 0.0), Complex(0.75, 0.0)}, 1, 1));
}

TEST(CompositionSchedule, RecursiveFlattening) {
  const auto s = cxcomp::CompositionSchedule::recursive(1, 3);
  ASSERT_EQ(s.coefficients().size(), 4u);
  const auto p1 = cxcomp::pair_coefficients(1, 0);
  const auto p2 = cxcomp::pair_coefficients(2, 0);
  EXPECT_NEAR(std::abs(s.coefficients()[0] - p2.a1 * p1.a1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coefficients()[1] - p2.a1 * p1.a2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coefficients()[2] - p2.a2 * p1.a1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.coefficients()[3] - p2.a2 * p1.a2), 0.0, 1e-15);
  EXPECT_EQ(cxcomp::CompositionSchedule::recursive(1, 4).coefficients().size(), 8u);
}

TEST(Compose, ZeroStepIsIdentity) {
  const FlowPtr be = std::make_shared<LinearBackwardEuler>(-1.0);
  const FlowPtr be2 = cxcomp::recursive_composition(be, 2);
  const FlowPtr sym = cxcomp::symmetric_average(be, cxcomp::pair_coefficients(1, 0));
  RVector y(3);
  y << 0.1, -2.5, 3.75;
  EXPECT_EQ(cxcomp::macro_step(*be2, 0.0, y, 0.0), y);
  EXPECT_EQ(cxcomp::macro_step(*sym, 0.0, y, 0.0), y);
}

TEST(Compose, RejectsMismatchedBaseOrder) {
  const FlowPtr hm = std::make_shared<LinearHeun>(-1.0);
  EXPECT_THROW((void)cxcomp::compose(hm, cxcomp::CompositionSchedule::conjugate_pair(cxcomp::pair_coefficients(1, 0))),
               cxcomp::DomainError);
}

TEST(Compose, PairRaisesBackwardEulerToSecondOrder) {
  const FlowPtr be = std::make_shared<LinearBackwardEuler>(-1.0);
  const FlowPtr be2 = cxcomp::compose(be, cxcomp::CompositionSchedule::conjugate_pair(cxcomp::pair_coefficients(1, 0)));
  // dt in {0.1, 0.05, 0.025}
  const double r1 = observed_rate(*be2, 10);
  const double r2 = observed_rate(*be2, 20);
  EXPECT_NEAR(r1, 2.0, 0.1);
  EXPECT_NEAR(r2, 2.0, 0.1);
  EXPECT_EQ(be2->order(), 2);
  EXPECT_EQ(be2->base_applications(), 2u);
}

struct OrderCase {
  const char* name;
  bool heun;
  int target;
  bool symmetric;
  int expected;
};

class OrderProperty : public testing::TestWithParam<OrderCase> {};

TEST_P(OrderProperty, ObservedRateMatchesClaimedOrder) {
  const auto& c = GetParam();
  FlowPtr base = c.heun ? FlowPtr(std::make_shared<LinearHeun>(-1.0)) : FlowPtr(std::make_shared<LinearBackwardEuler>(-1.0));
  FlowPtr flow = c.symmetric ? cxcomp::symmetric_average(base, cxcomp::pair_coefficients(base->order(), 0))
                             : cxcomp::recursive_composition(base, c.target);
  ASSERT_EQ(flow->order(), c.expected);
  // Finest pair of a geometric sweep whose errors stay above the rounding floor.
  int n = 4;
  double rate = 0.0;
  while (n <= 256) {
    const double e2 = error_at_one(*flow, 2 * n);
    if (e2 < 1e-12) {
      break;
    }
    rate = std::log2(error_at_one(*flow, n) / e2);
    n *= 2;
  }
  EXPECT_GE(rate, c.expected - 0.2) << c.name;
  EXPECT_LE(rate, c.expected + 0.2) << c.name;
}

INSTANTIATE_TEST_SUITE_P(Schemes, OrderProperty,
                         testing::Values(OrderCase{"BE1", false, 1, false, 1}, OrderCase{"BE2", false, 2, false, 2},
                                         OrderCase{"BE3", false, 3, false, 3}, OrderCase{"BE4", false, 4, false, 4},
                                         OrderCase{"HM1", true, 2, false, 2}, OrderCase{"HM2", true, 3, false, 3},
                                         OrderCase{"HM4", true, 4, false, 4}, OrderCase{"BE1SYM", false, 0, true, 3},
                                         OrderCase{"HM1SYM", true, 0, true, 4}),
                         [](const testing::TestParamInfo<OrderCase>& info) { return std::string(info.param.name); });

TEST(RecursiveComposition, SubstepCountsAndLabels) {
  const FlowPtr be = std::make_shared<LinearBackwardEuler>(-1.0);
  const FlowPtr be4 = cxcomp::recursive_composition(be, 4, cxcomp::default_branch_policy(), "BE4");
  EXPECT_EQ(be4->base_applications(), 8u);
  EXPECT_EQ(be4->order(), 4);
  EXPECT_EQ(be4->label(), "BE4");
  EXPECT_EQ(cxcomp::recursive_composition(be, 1), be);
}

TEST(SymmetricAverage, ImaginaryResidueCancels) {
  const FlowPtr be = std::make_shared<LinearBackwardEuler>(-3.0);
  const FlowPtr sym = cxcomp::symmetric_average(be, cxcomp::pair_coefficients(1, 0));
  CVector y(2);
  y << Complex(1.0, 0.0), Complex(-0.25, 0.0);
  const CVector out = sym->advance(Complex(0.0, 0.0), y, Complex(0.1, 0.0), MacroStep{0.0, 0.1});
  EXPECT_LT(out.imag().norm(), 1e-12 * out.real().norm());
  EXPECT_EQ(sym->order(), 3);
  EXPECT_EQ(sym->base_applications(), 4u);
}

TEST(Stability, BaseFunctions) {
  const auto be0 = cxcomp::stability_function(cxcomp::BaseScheme::BackwardEuler, {}, Complex(0.0, 0.0));
  EXPECT_EQ(be0.value, Complex(1.0, 0.0));
  EXPECT_TRUE(be0.in_region);
  const auto hm = cxcomp::stability_function(cxcomp::BaseScheme::Heun, {}, Complex(-2.0, 0.0));
  EXPECT_NEAR(std::abs(hm.value), 1.0, 1e-15);
  EXPECT_TRUE(hm.in_region);
  const auto pole = cxcomp::stability_function(cxcomp::BaseScheme::BackwardEuler, {}, Complex(1.0, 0.0));
  EXPECT_FALSE(pole.bounded);
  EXPECT_FALSE(pole.in_region);
}

TEST(Stability, ComposedBackwardEulerAtMinusOne) {
  const auto p = cxcomp::pair_coefficients(1, 0);
  const Complex c[2] = {p.a1, p.a2};
  const auto s = cxcomp::stability_function(cxcomp::BaseScheme::BackwardEuler, c, Complex(-1.0, 0.0));
  EXPECT_NEAR(s.value.real(), 0.4, 1e-15);
  EXPECT_NEAR(s.value.imag(), 0.0, 1e-15);
}

TEST(Stability, ProductIdentityAtRandomPoints) {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> re(-6.0, 2.0);
  std::uniform_real_distribution<double> im(-4.0, 4.0);
  const auto s = cxcomp::CompositionSchedule::recursive(1, 3);
  const auto h = cxcomp::CompositionSchedule::recursive(2, 4);
  for (int k = 0; k < 100; ++k) {
    const Complex z(re(rng), im(rng));
    Complex be = 1.0;
    for (const Complex& a : s.coefficients()) {
      be /= 1.0 - a * z;
    }
    Complex hm = 1.0;
    for (const Complex& a : h.coefficients()) {
      const Complex w = a * z;
      hm *= 1.0 + w + 0.5 * w * w;
    }
    const auto sb = cxcomp::stability_function(cxcomp::BaseScheme::BackwardEuler, s.coefficients(), z);
    const auto sh = cxcomp::stability_function(cxcomp::BaseScheme::Heun, h.coefficients(), z);
    EXPECT_LT(std::abs(sb.value - be), 1e-13 * std::max(1.0, std::abs(be)));
    EXPECT_LT(std::abs(sh.value - hm), 1e-13 * std::max(1.0, std::abs(hm)));
    EXPECT_EQ(sb.in_region, std::abs(sb.value) <= 1.0);
  }
}
