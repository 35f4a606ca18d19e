#include "spinchain/operators.hpp"

#include <cmath>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

std::size_t dim(int n) { return std::size_t{1} << n; }

// Action of one Pauli on a single bit: new bit and amplitude.
std::pair<int, cplx> pauli_on_bit(Pauli p, int bit) {
  switch (p) {
    case Pauli::I: return {bit, 1.0};
    case Pauli::X: return {bit ^ 1, 1.0};
    case Pauli::Y: return {bit ^ 1, bit == 0 ? cplx(0, 1) : cplx(0, -1)};
    case Pauli::Z: return {bit, bit == 0 ? 1.0 : -1.0};
  }
  return {bit, 1.0};
}

}  // namespace

Eigen::VectorXd z_diagonal(int n, int first, int last) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim(n)));
  for (std::size_t i = 0; i < dim(n); ++i) {
    int s = 0;
    for (int j = first; j <= last; ++j) s += spin_bit(i, j, n) == 0 ? 1 : -1;
    d(static_cast<Eigen::Index>(i)) = s;
  }
  return d;
}

Eigen::VectorXd total_z_diagonal(int n) { return z_diagonal(n, 0, n - 1); }

Operator pauli_string(int n, std::initializer_list<std::pair<int, Pauli>> factors) {
  const std::size_t d = dim(n);
  Operator out = Operator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t row = col;
    cplx amp = 1.0;
    for (const auto& [site, p] : factors) {
      if (site < 0 || site >= n) throw DomainError("pauli_string: site out of range");
      const int bit = spin_bit(row, site, n);
      const auto [nb, a] = pauli_on_bit(p, bit);
      if (nb != bit) row ^= std::size_t{1} << (n - 1 - site);
      amp *= a;
    }
    out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += amp;
  }
  return out;
}

Operator collective(int n, Pauli axis) {
  const auto d = static_cast<Eigen::Index>(dim(n));
  Operator out = Operator::Zero(d, d);
  for (int j = 0; j < n; ++j) out += pauli_string(n, {{j, axis}});
  return out;
}

RotationAxis RotationAxis::y() { return {Kind::Transverse, constants::pi / 2}; }
RotationAxis RotationAxis::minus_x() { return {Kind::Transverse, constants::pi}; }
RotationAxis RotationAxis::minus_y() { return {Kind::Transverse, -constants::pi / 2}; }

std::array<cplx, 4> rotation_matrix_2x2(const RotationAxis& axis, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  if (axis.kind == RotationAxis::Kind::Z) {
    return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
  }
  const cplx mi(0, -1);
  // n.sigma = [[0, e^{-i phase}], [e^{i phase}, 0]]
  return {c, mi * s * std::polar(1.0, -axis.phase), mi * s * std::polar(1.0, axis.phase), c};
}

Operator collective_rotation(int n, const RotationAxis& axis, double angle) {
  const auto u = rotation_matrix_2x2(axis, angle);
  Eigen::Matrix2cd u2;
  u2 << u[0], u[1], u[2], u[3];
  Operator r = Operator::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    Operator next(r.rows() * 2, r.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * r.rows(), b * r.cols(), r.rows(), r.cols()) = u2(a, b) * r;
    r = std::move(next);
  }
  return r;
}

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.norm(), 1.0);
  return (a - a.adjoint()).norm() <= tol * scale;
}

int coherence_order(std::size_t a, std::size_t b, int n) {
  // m_a - m_b where each up spin contributes +1/2: equals (#ones(b) - #ones(a)).
  const std::size_t mask = dim(n) - 1;
  return std::popcount(b & mask) - std::popcount(a & mask);
}

double hs_inner(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  return (a.array().conjugate() * b.array()).real().sum();
}

cplx trace_product(const Operator& a, const Operator& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: shape mismatch");
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace spinchain
