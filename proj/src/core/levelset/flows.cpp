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

#include "cxcomp/levelset/flows.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <utility>

#include <Eigen/UmfPackSupport>

#include "cxcomp/errors.hpp"

namespace cxcomp::levelset {
namespace {

// Small most-recently-used cache; composed steps revisit only a handful of keys.
template <class Key, class Value>
class RecentCache {
 public:
  explicit RecentCache(std::size_t capacity) : capacity_(capacity) {}

  template <class Make>
  std::shared_ptr<const Value> get(const Key& key, Make&& make) {
    {
      std::lock_guard lock(mutex_);
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->first == key) {
          auto value = it->second;
          entries_.erase(it);
          entries_.emplace_front(key, value);
          return value;
        }
      }
    }
    std::shared_ptr<const Value> value = make();
    std::lock_guard lock(mutex_);
    entries_.emplace_front(key, value);
    if (entries_.size() > capacity_) {
      entries_.pop_back();
    }
    return value;
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::deque<std::pair<Key, std::shared_ptr<const Value>>> entries_;
};

struct TransportKey {
  Complex transport_time;
  double weighting_time;
  bool operator==(const TransportKey&) const = default;
};

struct ImplicitKey {
  Complex h;
  Complex transport_time;
  double weighting_time;
  bool operator==(const ImplicitKey&) const = default;
};

std::shared_ptr<const SparseSolver> factorize(const SparseMatrix& matrix, const char* what) {
  return std::make_shared<const SparseSolver>(matrix, what);
}

CVector solve(const SparseSolver& solver, const CVector& rhs, const char* what) {
  try {
    return solver.solve(rhs);
  } catch (const LinearSolveError& e) {
    throw LinearSolveError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

struct SparseFactorization::Impl {
  SparseMatrix matrix;
  Eigen::UmfPackLU<SparseMatrix> lu;
  std::string what;
  std::mutex mutex;
};

SparseFactorization::SparseFactorization(SparseMatrix matrix, std::string what) : impl_(std::make_unique<Impl>()) {
  impl_->matrix = std::move(matrix);
  impl_->matrix.makeCompressed();
  impl_->what = std::move(what);
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw LinearSolveError(impl_->what + ": sparse LU failed (singular matrix?)");
  }
}

SparseFactorization::~SparseFactorization() = default;

const SparseMatrix& SparseFactorization::matrix() const noexcept { return impl_->matrix; }

CVector SparseFactorization::solve(const CVector& rhs) const {
  std::lock_guard lock(impl_->mutex);
  CVector x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw LinearSolveError(impl_->what + ": solve failed");
  }
  return x;
}

struct LevelSetProblem::Caches {
  RecentCache<double, SparseMatrix> mass{4};
  RecentCache<TransportKey, SparseMatrix> transport{6};
  RecentCache<double, SparseMatrix> transport_shape{2};
  RecentCache<double, SparseSolver> mass_solver{2};
  RecentCache<ImplicitKey, SparseSolver> implicit{8};
};

LevelSetProblem::LevelSetProblem(std::shared_ptr<const FemSpace> space, VelocityField velocity,
                                 LevelSetOptions options)
    : space_(std::move(space)),
      velocity_(std::move(velocity)),
      options_(std::move(options)),
      caches_(std::make_unique<Caches>()) {
  if (!space_) {
    throw DomainError("level-set problem needs a finite element space");
  }
  if (!velocity_.evaluate) {
    throw DomainError("level-set problem needs a velocity field");
  }
}

LevelSetProblem::~LevelSetProblem() = default;

AssemblyTimes LevelSetProblem::times_at(Complex t, const MacroStep& macro) const {
  switch (options_.time_evaluation) {
    case TimeEvaluation::HolomorphicTransport:
      return {t, macro.midpoint()};
    case TimeEvaluation::RealPart:
      return {Complex(t.real(), 0.0), t.real()};
  }
  return {t, t.real()};
}

AssemblyTimes LevelSetProblem::cache_key(const AssemblyTimes& times) const {
  if (!velocity_.time_dependent) {
    return {Complex(0.0, 0.0), 0.0};
  }
  return times;
}

std::shared_ptr<const SparseMatrix> LevelSetProblem::mass(double weighting_time) const {
  const double key = cache_key({Complex(weighting_time, 0.0), weighting_time}).weighting_time;
  return caches_->mass.get(key, [&] {
    assemblies_.fetch_add(1, std::memory_order_relaxed);
    return std::make_shared<const SparseMatrix>(
        assemble_mass(*space_, velocity_, key, options_.supg, options_.assembly_threads));
  });
}

std::shared_ptr<const SparseMatrix> LevelSetProblem::transport(const AssemblyTimes& times) const {
  const AssemblyTimes key = cache_key(times);
  return caches_->transport.get(TransportKey{key.transport_time, key.weighting_time}, [&] {
    if (velocity_.separable()) {
      const auto shape = caches_->transport_shape.get(key.weighting_time, [&] {
        assemblies_.fetch_add(1, std::memory_order_relaxed);
        return std::make_shared<const SparseMatrix>(assemble_transport_shape(
            *space_, velocity_, key.weighting_time, options_.supg, options_.assembly_threads));
      });
      return std::make_shared<const SparseMatrix>(velocity_.time_factor(key.transport_time) * *shape);
    }
    assemblies_.fetch_add(1, std::memory_order_relaxed);
    return std::make_shared<const SparseMatrix>(
        assemble_transport(*space_, velocity_, key, options_.supg, options_.assembly_threads));
  });
}

std::shared_ptr<const SparseSolver> LevelSetProblem::mass_solver(double weighting_time) const {
  const double key = cache_key({Complex(weighting_time, 0.0), weighting_time}).weighting_time;
  return caches_->mass_solver.get(key, [&] {
    factorizations_.fetch_add(1, std::memory_order_relaxed);
    return factorize(*mass(weighting_time), "mass matrix");
  });
}

std::shared_ptr<const SparseSolver> LevelSetProblem::implicit_solver(Complex h, const AssemblyTimes& times) const {
  const AssemblyTimes key = cache_key(times);
  return caches_->implicit.get(ImplicitKey{h, key.transport_time, key.weighting_time}, [&] {
    factorizations_.fetch_add(1, std::memory_order_relaxed);
    SparseMatrix system = *mass(times.weighting_time) + h * *transport(times);
    const std::vector<int> pinned = inflow_dofs(times.weighting_time);
    if (!pinned.empty()) {
      std::vector<char> is_pinned(space_->dof_count(), 0);
      for (int i : pinned) {
        is_pinned[static_cast<std::size_t>(i)] = 1;
      }
      for (Eigen::Index col = 0; col < system.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(system, col); it; ++it) {
          if (is_pinned[static_cast<std::size_t>(it.row())]) {
            it.valueRef() = it.row() == col ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
          }
        }
      }
    }
    return factorize(system, "implicit level-set system");
  });
}

std::vector<int> LevelSetProblem::inflow_dofs(double t) const {
  std::vector<int> dofs;
  if (!options_.inflow) {
    return dofs;
  }
  const auto& xs = space_->dof_coordinates();
  const auto& normals = space_->vertex_normals();
  for (int v : space_->mesh().boundary_vertices) {
    const Velocity2 u = velocity_.evaluate(Complex(t, 0.0), xs[static_cast<std::size_t>(v)]);
    const Point2& nrm = normals[static_cast<std::size_t>(v)];
    if (u[0].real() * nrm.x() + u[1].real() * nrm.y() < 0.0) {
      dofs.push_back(v);
    }
  }
  return dofs;
}

void LevelSetProblem::apply_inflow(CVector& dofs, double t) const {
  if (!options_.inflow) {
    return;
  }
  const auto& xs = space_->dof_coordinates();
  for (int v : inflow_dofs(t)) {
    dofs(v) = options_.inflow->value(t, xs[static_cast<std::size_t>(v)]);
  }
}

LevelSetState be1_fem_step(const LevelSetProblem& problem, const LevelSetState& state, Complex h,
                           const MacroStep& macro) {
  if (state.dofs.size() != static_cast<Eigen::Index>(problem.space().dof_count())) {
    throw DomainError("level-set state does not match the finite element space");
  }
  const AssemblyTimes prev = problem.times_at(state.t, macro);
  const AssemblyTimes next = problem.times_at(state.t + h, macro);
  CVector rhs = *problem.mass(prev.weighting_time) * state.dofs;
  const double t_next_real = (state.t + h).real();
  for (int v : problem.inflow_dofs(next.weighting_time)) {
    rhs(v) = problem.options().inflow->value(t_next_real, problem.space().dof_coordinates()[static_cast<std::size_t>(v)]);
  }
  const auto solver = problem.implicit_solver(h, next);
  return {solve(*solver, rhs, "backward Euler level-set step"), state.t + h};
}

LevelSetState hm1_fem_step(const LevelSetProblem& problem, const LevelSetState& state, Complex h,
                           const MacroStep& macro) {
  if (state.dofs.size() != static_cast<Eigen::Index>(problem.space().dof_count())) {
    throw DomainError("level-set state does not match the finite element space");
  }
  const AssemblyTimes prev = problem.times_at(state.t, macro);
  const AssemblyTimes next = problem.times_at(state.t + h, macro);
  const auto mass_next = problem.mass_solver(next.weighting_time);
  const CVector v1 = solve(*mass_next, *problem.transport(prev) * state.dofs, "Heun level-set stage 1");
  const CVector predictor = state.dofs - h * v1;
  const CVector v2 = solve(*mass_next, *problem.transport(next) * predictor, "Heun level-set stage 2");
  CVector out = state.dofs - (0.5 * h) * (v1 + v2);
  problem.apply_inflow(out, (state.t + h).real());
  return {std::move(out), state.t + h};
}

FemBackwardEulerFlow::FemBackwardEulerFlow(std::shared_ptr<const LevelSetProblem> problem, std::string label)
    : problem_(std::move(problem)), label_(std::move(label)) {}

CVector FemBackwardEulerFlow::advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const {
  return be1_fem_step(*problem_, LevelSetState{y, t}, h, macro).dofs;
}

FemHeunFlow::FemHeunFlow(std::shared_ptr<const LevelSetProblem> problem, std::string label)
    : problem_(std::move(problem)), label_(std::move(label)) {}

CVector FemHeunFlow::advance(Complex t, const CVector& y, Complex h, const MacroStep& macro) const {
  return hm1_fem_step(*problem_, LevelSetState{y, t}, h, macro).dofs;
}

}  // namespace cxcomp::levelset
