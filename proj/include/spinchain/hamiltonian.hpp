#pragma once

#include <Eigen/Dense>

#include "spinchain/chain_spec.hpp"
#include "spinchain/operators.hpp"

namespace spinchain {

enum class HamiltonianKind { Dipolar, DoubleQuantum };

inline constexpr int default_dense_limit = 14;
inline constexpr int default_evolution_limit = 12;

const char* to_string(HamiltonianKind kind);

/// Real symmetric matrix in the computational basis. Both supported
/// Hamiltonians have real matrix elements.
struct Hamiltonian {
  HamiltonianKind kind = HamiltonianKind::Dipolar;
  int n_spins = 0;
  Eigen::MatrixXd matrix;

  Operator complex_matrix() const { return matrix.cast<cplx>(); }
};

/// Dipolar: sum_{j<l} b_jl [zz - (xx + yy)/2].
/// DoubleQuantum: sum_{j<l} (b_jl / 2)(xx - yy).
/// Throws CapacityError above `dense_limit` spins.
Hamiltonian build_hamiltonian(const ChainSpec& spec, HamiltonianKind kind,
                              int dense_limit = default_dense_limit);

}  // namespace spinchain
