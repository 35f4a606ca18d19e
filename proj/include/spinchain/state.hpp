#pragma once

#include <optional>
#include <string>

#include "spinchain/chain_spec.hpp"
#include "spinchain/operators.hpp"

namespace spinchain {

enum class NamedState { Thermal, EndPolarized, LogicalXL, LogicalYL, LogicalZL };

const char* to_string(NamedState s);
/// Accepts "thermal", "end", "xL", "yL", "zL" (case-insensitive). Throws ConfigError.
NamedState named_state_from_string(const std::string& s);

/// Deviation part of a density operator on 2^N levels.
class DeviationOperator {
 public:
  /// Hermitian check at 1e-12 (relative, Frobenius); throws DomainError.
  static DeviationOperator dense(Operator matrix, double normalization = 1.0);
  static DeviationOperator named(NamedState name, int n_spins);

  int n_spins() const noexcept { return n_spins_; }
  const Operator& matrix() const noexcept { return matrix_; }
  const std::optional<NamedState>& name() const noexcept { return name_; }
  double normalization() const noexcept { return normalization_; }

 private:
  DeviationOperator(Operator m, int n, std::optional<NamedState> name, double norm)
      : matrix_(std::move(m)), n_spins_(n), name_(name), normalization_(norm) {}

  Operator matrix_;
  int n_spins_ = 0;
  std::optional<NamedState> name_;
  double normalization_ = 1.0;
};

/// Named state for `spec`. EndPolarized needs N >= 2, logical states N >= 4.
DeviationOperator initial_state(NamedState name, const ChainSpec& spec);

/// Logical operator on the pair (site, site + 1): sigma_{xL}, sigma_{yL} or sigma_{zL}.
Operator logical_pair_operator(int n, int site, NamedState which);

enum class ObservableKind {
  CollectiveZ,
  /// Ideal end readout sigma_z^1 + sigma_z^N.
  EndSpins,
  /// End-selection readout sequence followed by CollectiveZ.
  EndReadout,
  /// sum sigma_x + i sum sigma_y, for free induction decays.
  CollectiveTransverse,
  Custom,
};

struct Observable {
  ObservableKind kind = ObservableKind::CollectiveZ;
  /// End-selection time for EndReadout, s.
  double t1 = 0.0;
  /// Matrix for Custom.
  Operator matrix;

  static Observable collective_z() { return {}; }
  static Observable end_spins() { return {ObservableKind::EndSpins, 0.0, {}}; }
  static Observable end_readout(double t1) { return {ObservableKind::EndReadout, t1, {}}; }
  static Observable collective_transverse() { return {ObservableKind::CollectiveTransverse, 0.0, {}}; }
  /// Throws DomainError when `m` is not Hermitian within 1e-12.
  static Observable custom(Operator m);
};

const char* to_string(ObservableKind k);

/// Dense matrix for the kinds that need no dynamics (everything but EndReadout).
Operator observable_matrix(const Observable& obs, int n_spins);

/// Raw Tr[rho O].
cplx measure_raw(const Operator& rho, const Operator& obs);

/// Tr[rho O] / ref, where ref = Tr[rho0 O] when |Tr[rho0 O]| is above
/// 1e-9 * ||rho0|| ||O||, else Tr[rho0^2].
double normalization_reference(const Operator& rho0, const Operator& obs);

}  // namespace spinchain
