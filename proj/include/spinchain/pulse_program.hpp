#pragma once

#include <variant>
#include <vector>

#include "spinchain/operators.hpp"
#include "spinchain/propagator.hpp"

namespace spinchain {

struct Rotation {
  RotationAxis axis;
  double angle = 0.0;
};

struct FreeEvolution {
  HamiltonianKind hamiltonian = HamiltonianKind::Dipolar;
  double duration = 0.0;
};

using PulseStep = std::variant<Rotation, FreeEvolution>;

/// One entry of a phase cycle: every transverse rotation axis is shifted by
/// `phase_offset`, the branch result is multiplied by `weight`.
struct PhaseCycleEntry {
  double phase_offset = 0.0;
  cplx weight = 1.0;
};

/// The propagators a program may reference. Null entries are allowed when
/// the program has no free evolution under that Hamiltonian.
struct PropagatorSet {
  const Propagator* dipolar = nullptr;
  const Propagator* double_quantum = nullptr;
};

/// Ordered list of delta pulses and free evolutions plus a phase cycle.
class PulseProgram {
 public:
  PulseProgram() = default;
  /// Empty `cycle` means a single entry with zero offset and unit weight.
  /// Throws DomainError for negative durations.
  PulseProgram(std::vector<PulseStep> steps, std::vector<PhaseCycleEntry> cycle = {});

  const std::vector<PulseStep>& steps() const noexcept { return steps_; }
  const std::vector<PhaseCycleEntry>& cycle() const noexcept { return cycle_; }
  double duration() const;

  /// sum_k w_k U_k rho U_k^dagger over the phase cycle.
  Operator apply(const Operator& rho, int n_spins, const PropagatorSet& props) const;
  /// Dense propagator of one cycle branch.
  Operator unitary(int n_spins, const PropagatorSet& props, double phase_offset = 0.0) const;

 private:
  std::vector<PulseStep> steps_;
  std::vector<PhaseCycleEntry> cycle_;
};

/// Axis shifted in the transverse plane; z axes are unchanged.
RotationAxis shifted(const RotationAxis& axis, double phase_offset);

}  // namespace spinchain
