#pragma once

#include <string>
#include <vector>

#include "spinchain/propagator.hpp"
#include "spinchain/state.hpp"

namespace spinchain {

/// Multiple-quantum intensities J_n(t), n = -K..K.
struct CoherenceSpectrum {
  int max_order = 0;
  std::vector<double> times;
  /// intensities[i][n + K] is J_n(times[i]).
  std::vector<std::vector<double>> intensities;
  std::vector<std::string> warnings;

  double at(std::size_t time_index, int order) const;
  /// J_n at every time.
  std::vector<double> order(int n) const;
};

/// 2K phase-labelled MQC experiments at one DQ evolution time, Fourier
/// transformed over the phase. `readout` is the observable measured on rho_f
/// (already in matrix form). Returns complex J_n, n = -K..K, divided by `norm`.
std::vector<cplx> mqc_row(const Operator& rho0, const Operator& readout, const Propagator& dq, double t, int K,
                          double norm);

/// MQC spectrum over a time grid. Normalisation: Tr[rho0 O] when nonzero,
/// else Tr[rho0^2]. Emits a warning when |J_K| exceeds `alias_tol`.
CoherenceSpectrum run_mqc_protocol(const Operator& rho0, const Operator& readout, const Propagator& dq,
                                   const std::vector<double>& times, int K, double alias_tol = 1e-8);

}  // namespace spinchain
