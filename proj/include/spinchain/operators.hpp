#pragma once

#include <Eigen/Dense>
#include <array>
#include <bit>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

// Dense operators on the 2^N computational basis.
//
// Basis convention: basis index i encodes spin j (0-based) in bit (N-1-j), so
// spin 0 is the most significant bit. Bit value 0 is spin up (sigma_z = +1).

namespace spinchain {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;

enum class Pauli { I, X, Y, Z };

/// Bit of spin `site` in basis index `index` for an `n`-spin register.
inline int spin_bit(std::size_t index, int site, int n) {
  return static_cast<int>((index >> (n - 1 - site)) & 1u);
}

/// Diagonal of sum_{j in [first, last]} sigma_z^j.
Eigen::VectorXd z_diagonal(int n, int first, int last);
/// Diagonal of the collective sigma_z = sum_j sigma_z^j.
Eigen::VectorXd total_z_diagonal(int n);

/// Product of single-spin Pauli factors, identity elsewhere.
Operator pauli_string(int n, std::initializer_list<std::pair<int, Pauli>> factors);
/// sum_j sigma_axis^j.
Operator collective(int n, Pauli axis);

/// Rotation axis for collective pulses: either in the transverse plane at
/// azimuth `phase` (0 = x, pi/2 = y) or along z.
struct RotationAxis {
  enum class Kind { Transverse, Z };
  Kind kind = Kind::Transverse;
  double phase = 0.0;

  static RotationAxis x() { return {Kind::Transverse, 0.0}; }
  static RotationAxis y();
  static RotationAxis minus_x();
  static RotationAxis minus_y();
  static RotationAxis z() { return {Kind::Z, 0.0}; }
  static RotationAxis transverse(double phase) { return {Kind::Transverse, phase}; }
};

/// Single-spin matrix exp(-i angle n.sigma / 2) stored row-major {u00, u01, u10, u11}.
std::array<cplx, 4> rotation_matrix_2x2(const RotationAxis& axis, double angle);

/// Dense collective rotation exp(-i angle sum_j n.sigma_j / 2). O(4^N) memory.
Operator collective_rotation(int n, const RotationAxis& axis, double angle);

/// ||A - A^dagger||_F <= tol * max(||A||_F, 1).
bool is_hermitian(const Operator& a, double tol = 1e-12);

/// Coherence order of element (a, b): m_a - m_b with m = sum sigma_z / 2.
int coherence_order(std::size_t a, std::size_t b, int n);

/// Part of `a` with coherence orders selected by `keep(order)`.
template <class Pred>
Operator coherence_filter(const Operator& a, int n, Pred keep) {
  Operator out = Operator::Zero(a.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (keep(coherence_order(static_cast<std::size_t>(r), static_cast<std::size_t>(c), n)))
        out(r, c) = a(r, c);
  return out;
}

/// Re Tr[a^dagger b].
double hs_inner(const Operator& a, const Operator& b);

/// Tr[a b] without forming the product.
cplx trace_product(const Operator& a, const Operator& b);

}  // namespace spinchain
