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

#include <string>
#include <string_view>
#include <vector>

#include "cxcomp/composition.hpp"
#include "cxcomp/flow.hpp"

namespace cxcomp::bench {

enum class Construction { Base, Recursive, SymmetricAverage, TripleJump };

/// Parsed scheme label.
///   BE<k>     backward Euler raised to order k by k-1 nested pairs
///   HM1       Heun; HM<2^m> is Heun raised to order m+2
///   <X>-SYM   symmetric average of X with pair(order(X), 0)
///   <X>-TJ    real triple jump of X (X of even order)
struct SchemeSpec {
  std::string label;
  BaseScheme base = BaseScheme::BackwardEuler;
  Construction construction = Construction::Base;
  std::string inner;  ///< label of the wrapped scheme for -SYM and -TJ
  int order = 1;
  /// Flattened substep coefficients; the stability function is the product of the
  /// base function over them. Empty for the base scheme.
  std::vector<Complex> coefficients;
};

/// Throws ConfigError for unknown labels.
[[nodiscard]] SchemeSpec parse_scheme(std::string_view label);
[[nodiscard]] bool is_known_scheme(std::string_view label) noexcept;

/// Builds the flow for `spec` on top of an order-1 (BE) or order-2 (Heun) base flow.
[[nodiscard]] FlowPtr make_flow(const SchemeSpec& spec, FlowPtr base);

}  // namespace cxcomp::bench
