#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "spinchain/operators.hpp"

// Hot loops of the dense engine. Each parallel kernel has a serial reference
// with the plain textbook formulation, used by the tests and the benchmark.

namespace spinchain::kernels {

/// rho <- R rho R^dagger with R = u (x) u (x) ... (x) u, applied one spin at a time.
void rotate_collective(Operator& rho, int n, const std::array<cplx, 4>& u);
/// Same result through the dense 2^N x 2^N Kronecker product.
void rotate_collective_reference(Operator& rho, int n, const std::array<cplx, 4>& u);

/// rho_ab <- rho_ab exp(-i phi (m_a - m_b)) with m = sum sigma_z / 2.
void apply_z_phase(Operator& rho, int n, double phi);

/// One rectangular block of spectral weights W (rows: energies `ea`, cols: `eb`).
struct WeightBlock {
  Eigen::MatrixXcd w;
  Eigen::VectorXd ea;
  Eigen::VectorXd eb;
};

/// S(t) = sum_blocks sum_ab W_ab exp(-i (E_a - E_b) t) for every t.
std::vector<cplx> phase_sweep(const std::vector<WeightBlock>& blocks, const std::vector<double>& times);
/// Element-by-element evaluation of the same sum.
std::vector<cplx> phase_sweep_reference(const std::vector<WeightBlock>& blocks, const std::vector<double>& times);

}  // namespace spinchain::kernels
