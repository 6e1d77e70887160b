#pragma once

#include <memory>

#include "lrlab/evolution.hpp"

namespace lrlab::detail {

/// Spectral propagator when H is time-independent and small enough for the
/// dense path under the plan's backend choice; null otherwise.
std::shared_ptr<const SpectralPropagator> maybe_spectral(const HamiltonianSpec& h, const PropagatorPlan& plan);

/// State carried forward along an increasing time grid.
class Trajectory {
 public:
  Trajectory(const HamiltonianSpec& h, const PropagatorPlan& plan, std::shared_ptr<const SpectralPropagator> spectral,
             Vector initial);

  double time() const { return t_; }
  const Vector& state() const { return v_; }
  const Vector& advance_to(double t);

 private:
  const HamiltonianSpec* h_;
  PropagatorPlan plan_;
  std::shared_ptr<const SpectralPropagator> spectral_;
  Vector initial_;
  Vector v_;
  double t_;
};

}  // namespace lrlab::detail
