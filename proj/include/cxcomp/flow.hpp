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

#include <cstddef>
#include <memory>
#include <string>

#include "cxcomp/types.hpp"

namespace cxcomp {

/// The real macro step a substep belongs to. Composed flows forward it unchanged
/// to every base application, so base flows can freeze quantities per macro step.
struct MacroStep {
  double t0 = 0.0;
  double dt = 0.0;

  [[nodiscard]] double midpoint() const noexcept { return t0 + 0.5 * dt; }
};

/// One-step numerical flow y -> Phi_h(y) over complex-capable states.
///
/// `advance` never projects to the real axis; composed flows carry the complex
/// state through all of their substeps and the driver takes the real part once
/// per macro step (see macro_step()). Implementations are immutable after
/// construction and may be shared between threads.
class FlowStep {
 public:
  virtual ~FlowStep() = default;

  /// Applies the flow with (possibly complex) step `h` starting at complex time `t`.
  [[nodiscard]] virtual CVector advance(Complex t, const CVector& y, Complex h,
                                        const MacroStep& macro) const = 0;

  /// Classical order p: local error O(h^{p+1}).
  [[nodiscard]] virtual int order() const noexcept = 0;

  [[nodiscard]] virtual std::string label() const = 0;

  /// Number of base-flow applications per call to advance().
  [[nodiscard]] virtual std::size_t base_applications() const noexcept { return 1; }
};

using FlowPtr = std::shared_ptr<const FlowStep>;

/// One real macro step: Re(Phi_dt(y)). A zero step returns `y` unchanged.
[[nodiscard]] RVector macro_step(const FlowStep& flow, double t, const RVector& y, double dt);

}  // namespace cxcomp
