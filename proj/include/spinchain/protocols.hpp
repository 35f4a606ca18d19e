#pragma once

#include <vector>

#include "spinchain/chain_spec.hpp"
#include "spinchain/propagator.hpp"
#include "spinchain/pulse_program.hpp"
#include "spinchain/state.hpp"

namespace spinchain {

/// TwoStep is the alpha = x, y cycle of the experiment. It removes coherence
/// orders n = 2 (mod 4) but keeps orders +-4. ZeroQuantum cycles alpha over
/// N + 1 equally spaced transverse phases and keeps only order 0.
enum class EndSelectionCycle { TwoStep, ZeroQuantum };

const char* to_string(EndSelectionCycle c);

/// Transverse phases of the end-selection cycle for `n` spins.
std::vector<double> end_selection_phases(EndSelectionCycle cycle, int n);

/// pi/2|alpha -- t1 -- pi/2|-alpha with the given cycle, as a generic program.
PulseProgram end_selection_program(double t1, int n, EndSelectionCycle cycle = EndSelectionCycle::TwoStep);

/// Cached end-selection map for one input operator. The input is rotated and
/// transformed to the dipolar eigenbasis once; each `apply(t1)` then costs one
/// inverse transform. Negative t1 is accepted and gives the adjoint map.
class EndSelector {
 public:
  EndSelector(const Propagator& dipolar, const Operator& input,
              EndSelectionCycle cycle = EndSelectionCycle::TwoStep);

  Operator apply(double t1) const;
  const Propagator& propagator() const noexcept { return *prop_; }

 private:
  const Propagator* prop_;
  EndSelectionCycle cycle_;
  std::vector<double> phases_;
  bool z_symmetric_ = false;
  std::vector<Operator> branches_;  // eigenbasis, one per needed phase
};

/// End selection applied to the thermal state. Requires t1 >= 0.
Operator run_end_selection(const Propagator& dipolar, double t1,
                           EndSelectionCycle cycle = EndSelectionCycle::TwoStep);

/// Heisenberg-picture end selection: Tr[P(rho) O] = Tr[rho P^dagger(O)].
Operator end_selection_adjoint(const Propagator& dipolar, double t1, const Operator& obs,
                               EndSelectionCycle cycle = EndSelectionCycle::TwoStep);

/// Tr[rho E]^2 / (Tr[rho^2] Tr[E^2]) with E = sigma_z^1 + sigma_z^N.
double end_state_fidelity(const Operator& rho, int n);

struct EndSelectionOptimum {
  double t1 = 0.0;
  double fidelity = 0.0;
  std::vector<double> grid;
  std::vector<double> fidelities;
};

/// Fidelity-maximising t1 over `grid`.
EndSelectionOptimum optimal_end_selection_time(const Propagator& dipolar, const std::vector<double>& grid,
                                               EndSelectionCycle cycle = EndSelectionCycle::TwoStep);

/// Default scan grid for the optimum: 0 to 60 us in 1 us steps.
std::vector<double> default_end_selection_grid();

/// (1/M) sum_k exp(2 i phi_k) U_phi_k rho U_phi_k^dagger, phi_k = 2 pi k / M,
/// Hermitian-symmetrised. With M = 4 this keeps orders n = 2 (mod 4).
Operator run_dq_filter(const Operator& rho, int n, int phase_steps = 4);

/// Tr[a b] / (||a|| ||b||).
double normalized_overlap(const Operator& a, const Operator& b);

/// End selection at `t1`, DQ evolution for `t_short`, an optional pi/4
/// z rotation (xL), then the DQ filter. The output is rescaled to the
/// Frobenius norm of the target logical operator with non-negative overlap.
DeviationOperator prepare_logical(const Propagator& dipolar, const Propagator& dq, NamedState kind,
                                  double t_short, double t1);
/// Same with t1 from optimal_end_selection_time on the default grid.
DeviationOperator prepare_logical(const Propagator& dipolar, const Propagator& dq, NamedState kind,
                                  double t_short);
/// Preparation from an explicit starting state (skips end selection).
DeviationOperator prepare_logical_from(const Operator& start, const Propagator& dq, NamedState kind,
                                       double t_short);

/// Four blocks tau/2 - P(phi) - 2 tau - P(phi + pi) - tau/2, phi = y, -y, -y, y.
PulseProgram eight_pulse_program(double delay);

/// Frobenius distance between n_loops eight-pulse cycles (delta pulses,
/// dipolar evolution) and exp(-i H_DQ 12 delay n_loops).
double run_eight_pulse_check(const ChainSpec& spec, double delay, int n_loops);

}  // namespace spinchain
