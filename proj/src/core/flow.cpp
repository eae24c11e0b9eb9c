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

#include "cxcomp/flow.hpp"

namespace cxcomp {

RVector macro_step(const FlowStep& flow, double t, const RVector& y, double dt) {
  if (dt == 0.0) {
    return y;
  }
  const CVector out = flow.advance(Complex(t, 0.0), y.cast<Complex>(), Complex(dt, 0.0), MacroStep{t, dt});
  return out.real();
}

}  // namespace cxcomp
