#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinchain/hamiltonian.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/operators.hpp"
#include "spinchain/state.hpp"

namespace spinchain {

/// exp(-i H t) through one Hermitian eigendecomposition of H.
///
/// H is split into the connected components of its sparsity graph (total-z
/// sectors for the dipolar Hamiltonian, parity sectors for the DQ one) and
/// each block is diagonalised separately. Operators in the "eigenbasis" are
/// indexed by eigenvector, blocks stored contiguously.
class Propagator {
 public:
  struct Block {
    std::vector<Eigen::Index> states;  // computational-basis indices
    Eigen::Index offset = 0;           // first eigen-index of the block
    Eigen::MatrixXd vectors;           // columns are eigenvectors
    Eigen::VectorXd energies;
  };

  explicit Propagator(const Hamiltonian& h, int evolution_limit = default_evolution_limit);

  int n_spins() const noexcept { return n_; }
  Eigen::Index dimension() const noexcept { return dim_; }
  HamiltonianKind kind() const noexcept { return kind_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  /// Energies in eigen-index order.
  const Eigen::VectorXd& energies() const noexcept { return energies_; }

  /// V^T a V. Block pairs whose computational sub-block is exactly zero are skipped.
  Operator to_eigenbasis(const Operator& a) const;
  /// Inverse of to_eigenbasis.
  Operator from_eigenbasis(const Operator& a) const;
  /// x_ab <- x_ab exp(-i (E_a - E_b) t) for an eigenbasis operator.
  void apply_phases(Operator& x, double t) const;

  Operator unitary(double t) const;
  /// U(t) rho U(t)^dagger.
  Operator evolve(const Operator& rho, double t) const;
  DeviationOperator evolve(const DeviationOperator& rho, double t) const;

  /// Tr[U(t) rho U(t)^dagger O] for every t.
  std::vector<cplx> expectation_sweep(const Operator& rho, const Operator& obs,
                                      const std::vector<double>& times) const;
  /// Spectral weights W_ab = rho~_ab O~_ba on the block pairs where both are nonzero.
  std::vector<kernels::WeightBlock> spectral_weights(const Operator& rho, const Operator& obs) const;

 private:
  std::vector<char> nonzero_pairs(const Operator& a) const;
  Operator transform(const Operator& a, bool forward, const std::vector<char>* pairs) const;

  int n_ = 0;
  Eigen::Index dim_ = 0;
  HamiltonianKind kind_ = HamiltonianKind::Dipolar;
  std::vector<Block> blocks_;
  Eigen::VectorXd energies_;
};

}  // namespace spinchain
