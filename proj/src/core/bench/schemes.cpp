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

#include "cxcomp/bench/schemes.hpp"

#include <charconv>

#include "cxcomp/errors.hpp"

namespace cxcomp::bench {

namespace {

constexpr std::string_view kSymSuffix = "-SYM";
constexpr std::string_view kTjSuffix = "-TJ";

bool parse_positive(std::string_view text, int& out) {
  if (text.empty()) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && out >= 1;
}

SchemeSpec parse_plain(std::string_view label) {
  SchemeSpec spec;
  spec.label = std::string(label);
  int k = 0;
  if (label.starts_with("BE") && parse_positive(label.substr(2), k) && k <= 12) {
    spec.base = BaseScheme::BackwardEuler;
    spec.order = k;
    if (k > 1) {
      spec.construction = Construction::Recursive;
      spec.coefficients = CompositionSchedule::recursive(1, k).coefficients();
    }
    return spec;
  }
  if (label.starts_with("HM") && parse_positive(label.substr(2), k) && k <= 1024 && (k & (k - 1)) == 0) {
    int m = 0;
    while ((1 << m) < k) {
      ++m;
    }
    spec.base = BaseScheme::Heun;
    spec.order = m + 2;
    if (m > 0) {
      spec.construction = Construction::Recursive;
      spec.coefficients = CompositionSchedule::recursive(2, m + 2).coefficients();
    }
    return spec;
  }
  throw ConfigError("unknown scheme label '" + std::string(label) + "'");
}

std::vector<Complex> outer_product(const std::vector<Complex>& outer, const std::vector<Complex>& inner) {
  if (inner.empty()) {
    return outer;
  }
  std::vector<Complex> out;
  out.reserve(outer.size() * inner.size());
  for (const Complex& o : outer) {
    for (const Complex& i : inner) {
      out.push_back(o * i);
    }
  }
  return out;
}

}  // namespace

SchemeSpec parse_scheme(std::string_view label) {
  if (label.ends_with(kSymSuffix)) {
    SchemeSpec inner = parse_scheme(label.substr(0, label.size() - kSymSuffix.size()));
    SchemeSpec spec = inner;
    spec.label = std::string(label);
    spec.inner = inner.label;
    spec.construction = Construction::SymmetricAverage;
    spec.order = inner.order + 2;
    const CoefficientPair pair = pair_coefficients(inner.order, 0);
    // Both orderings give the same scalar stability product.
    spec.coefficients = outer_product({pair.a1, pair.a2}, inner.coefficients);
    return spec;
  }
  if (label.ends_with(kTjSuffix)) {
    SchemeSpec inner = parse_scheme(label.substr(0, label.size() - kTjSuffix.size()));
    if (inner.order % 2 != 0) {
      throw ConfigError("triple jump needs an even-order scheme, got '" + inner.label + "'");
    }
    SchemeSpec spec = inner;
    spec.label = std::string(label);
    spec.inner = inner.label;
    spec.construction = Construction::TripleJump;
    spec.order = inner.order + 1;
    const auto tj = triple_jump_coefficients(inner.order);
    spec.coefficients = outer_product({tj[0], tj[1], tj[2]}, inner.coefficients);
    return spec;
  }
  return parse_plain(label);
}

bool is_known_scheme(std::string_view label) noexcept {
  try {
    (void)parse_scheme(label);
    return true;
  } catch (...) {
    return false;
  }
}

FlowPtr make_flow(const SchemeSpec& spec, FlowPtr base) {
  const int base_order = spec.base == BaseScheme::BackwardEuler ? 1 : 2;
  if (base->order() != base_order) {
    throw ConfigError("scheme " + spec.label + " needs a base flow of order " + std::to_string(base_order));
  }
  switch (spec.construction) {
    case Construction::Base:
      return base;
    case Construction::Recursive:
      return recursive_composition(std::move(base), spec.order, default_branch_policy(), spec.label);
    case Construction::SymmetricAverage: {
      FlowPtr inner = make_flow(parse_scheme(spec.inner), std::move(base));
      return symmetric_average(inner, pair_coefficients(inner->order(), 0), spec.label);
    }
    case Construction::TripleJump: {
      FlowPtr inner = make_flow(parse_scheme(spec.inner), std::move(base));
      return compose(inner, CompositionSchedule::triple_jump(inner->order()), spec.label);
    }
  }
  throw ConfigError("unhandled scheme construction");
}

}  // namespace cxcomp::bench
