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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cxcomp/flow.hpp"
#include "cxcomp/types.hpp"

namespace cxcomp {

// Tolerances for the composition order conditions.
inline constexpr double kCoefficientTolerance = 1e-15;
inline constexpr double kSumTolerance = 1e-13;
inline constexpr double kPowerTolerance = 1e-12;

/// Inclusive range of admissible branch indices l for a base order p.
struct BranchRange {
  int lo;
  int hi;

  [[nodiscard]] bool contains(int l) const noexcept { return l >= lo && l <= hi; }
};

[[nodiscard]] BranchRange admissible_branches(int base_order);

/// Conjugate coefficients (a1, a2) raising a flow of order p to order p+1 after
/// real projection. a1 + a2 = 1 and a1^{p+1} + a2^{p+1} = 0.
struct CoefficientPair {
  Complex a1;
  Complex a2;
  int base_order;
  int branch;
};

/// a1 = 1/2 + (i/2) sin(theta) / (1 + cos(theta)), theta = (2l+1) pi / (p+1), a2 = conj(a1).
///
/// Throws DomainError when p < 1 or l is outside admissible_branches(p), and
/// SingularBranchError when 1 + cos(theta) < 1e-14.
[[nodiscard]] CoefficientPair pair_coefficients(int base_order, int branch);

struct ConditionResiduals {
  double sum;    ///< |sum a_i - 1|
  double power;  ///< |sum a_i^{p+1}|
};

[[nodiscard]] ConditionResiduals validate_conditions(std::span<const Complex> coefficients,
                                                     int base_order);

/// Symmetric real triple jump for even p: a1 = a3 = 1 / (2 - 2^{1/(p+1)}), a2 = 1 - 2 a1.
/// The middle substep is negative. Odd p has no real solution and throws DomainError.
[[nodiscard]] std::array<double, 3> triple_jump_coefficients(int base_order);

/// Picks the branch l used when raising order p to p+1.
using BranchPolicy = std::function<int(int base_order)>;

[[nodiscard]] inline BranchPolicy default_branch_policy() {
  return [](int) { return 0; };
}

enum class RealProjection { EndOfMacroStep };

/// Ordered substep coefficients for a composition. coefficients()[0] is applied first.
class CompositionSchedule {
 public:
  /// Validates sum = 1 and, when claimed_order == base_order + 1, the
  /// order-raising condition sum a^{p+1} = 0. Throws DomainError otherwise.
  CompositionSchedule(std::vector<Complex> coefficients, int base_order, int claimed_order);

  [[nodiscard]] static CompositionSchedule conjugate_pair(const CoefficientPair& pair);
  [[nodiscard]] static CompositionSchedule triple_jump(int base_order);

  /// Flattened coefficients of the nested pair compositions from base_order up to
  /// target_order; 2^{target - base} entries.
  [[nodiscard]] static CompositionSchedule recursive(int base_order, int target_order,
                                                     const BranchPolicy& policy = default_branch_policy());

  [[nodiscard]] const std::vector<Complex>& coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] int base_order() const noexcept { return base_order_; }
  [[nodiscard]] int claimed_order() const noexcept { return claimed_order_; }
  [[nodiscard]] RealProjection real_projection() const noexcept { return RealProjection::EndOfMacroStep; }

 private:
  std::vector<Complex> coefficients_;
  int base_order_;
  int claimed_order_;
};

/// Phi_{a_s h} o ... o Phi_{a_1 h}: the base flow applied with each scaled step in
/// turn, complex state and accumulated complex time carried between substeps.
/// Throws DomainError if schedule.base_order() differs from base->order().
[[nodiscard]] FlowPtr compose(FlowPtr base, CompositionSchedule schedule, std::string label = {});

/// Repeatedly wraps compose() with pair_coefficients(current order, policy(order))
/// until target_order is reached.
[[nodiscard]] FlowPtr recursive_composition(FlowPtr base, int target_order,
                                            const BranchPolicy& policy = default_branch_policy(),
                                            std::string label = {});

/// (1/2)(Phi_{a1 h} o Phi_{a2 h} + Phi_{a2 h} o Phi_{a1 h}); order p+2 after projection.
/// On real problems the two imaginary parts cancel.
[[nodiscard]] FlowPtr symmetric_average(FlowPtr base, const CoefficientPair& pair, std::string label = {});

// Stability functions on the Dahlquist test equation y' = lambda y, z = lambda h.

enum class BaseScheme { BackwardEuler, Heun };

struct StabilitySample {
  Complex z;
  Complex value;    ///< S(z); infinite at a pole
  bool bounded;     ///< false when z hits a pole of S
  bool in_region;   ///< |S(z)| <= 1
};

/// S_BE(z) = 1/(1 - z), S_HM(z) = 1 + z + z^2/2. Returns an infinite value at poles.
[[nodiscard]] Complex base_stability(BaseScheme scheme, Complex z);

/// Product of base_stability(scheme, a_i z) over the coefficients; the base
/// scheme itself when `coefficients` is empty.
[[nodiscard]] StabilitySample stability_function(BaseScheme scheme,
                                                 std::span<const Complex> coefficients, Complex z);

}  // namespace cxcomp
