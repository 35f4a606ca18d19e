#include "spinchain/state.hpp"

#include <algorithm>
#include <cctype>

#include "spinchain/errors.hpp"

namespace spinchain {

const char* to_string(NamedState s) {
  switch (s) {
    case NamedState::Thermal: return "thermal";
    case NamedState::EndPolarized: return "end";
    case NamedState::LogicalXL: return "xL";
    case NamedState::LogicalYL: return "yL";
    case NamedState::LogicalZL: return "zL";
  }
  return "?";
}

NamedState named_state_from_string(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "thermal") return NamedState::Thermal;
  if (l == "end" || l == "end_polarized") return NamedState::EndPolarized;
  if (l == "xl") return NamedState::LogicalXL;
  if (l == "yl") return NamedState::LogicalYL;
  if (l == "zl") return NamedState::LogicalZL;
  throw ConfigError("unknown initial state '" + s + "' (expected thermal, end, xL, yL or zL)");
}

const char* to_string(ObservableKind k) {
  switch (k) {
    case ObservableKind::CollectiveZ: return "collective";
    case ObservableKind::EndSpins: return "end";
    case ObservableKind::EndReadout: return "end_sequence";
    case ObservableKind::CollectiveTransverse: return "transverse";
    case ObservableKind::Custom: return "custom";
  }
  return "?";
}

DeviationOperator DeviationOperator::dense(Operator m, double normalization) {
  if (m.rows() != m.cols() || m.rows() == 0 || (m.rows() & (m.rows() - 1)) != 0)
    throw DimensionError("deviation operator must be square with power-of-two dimension");
  if (!is_hermitian(m)) throw DomainError("deviation operator is not Hermitian");
  const int n = std::countr_zero(static_cast<std::size_t>(m.rows()));
  return DeviationOperator(std::move(m), n, std::nullopt, normalization);
}

Operator logical_pair_operator(int n, int site, NamedState which) {
  const int a = site, b = site + 1;
  switch (which) {
    case NamedState::LogicalXL:
      return 0.5 * (pauli_string(n, {{a, Pauli::X}, {b, Pauli::X}}) - pauli_string(n, {{a, Pauli::Y}, {b, Pauli::Y}}));
    case NamedState::LogicalYL:
      return 0.5 * (pauli_string(n, {{a, Pauli::Y}, {b, Pauli::X}}) + pauli_string(n, {{a, Pauli::X}, {b, Pauli::Y}}));
    case NamedState::LogicalZL:
      return 0.5 * (pauli_string(n, {{a, Pauli::Z}}) + pauli_string(n, {{b, Pauli::Z}}));
    default:
      throw DomainError("logical_pair_operator: not a logical state");
  }
}

DeviationOperator DeviationOperator::named(NamedState name, int n) {
  if (n < 1) throw DomainError("chain needs at least one spin");
  Operator m;
  switch (name) {
    case NamedState::Thermal:
      m = total_z_diagonal(n).cast<cplx>().asDiagonal();
      break;
    case NamedState::EndPolarized:
      if (n < 2) throw DomainError("end-polarized state needs N >= 2");
      m = (pauli_string(n, {{0, Pauli::Z}}) + pauli_string(n, {{n - 1, Pauli::Z}}));
      break;
    default:
      if (n < 4) throw DomainError(std::string("logical state ") + to_string(name) + " needs N >= 4");
      m = logical_pair_operator(n, 0, name) + logical_pair_operator(n, n - 2, name);
  }
  return DeviationOperator(std::move(m), n, name, 1.0);
}

DeviationOperator initial_state(NamedState name, const ChainSpec& spec) {
  return DeviationOperator::named(name, spec.n_spins());
}

Observable Observable::custom(Operator m) {
  if (!is_hermitian(m)) throw DomainError("custom observable is not Hermitian");
  return {ObservableKind::Custom, 0.0, std::move(m)};
}

Operator observable_matrix(const Observable& obs, int n) {
  switch (obs.kind) {
    case ObservableKind::CollectiveZ:
      return total_z_diagonal(n).cast<cplx>().asDiagonal();
    case ObservableKind::EndSpins:
      if (n < 2) throw DomainError("end readout needs N >= 2");
      return pauli_string(n, {{0, Pauli::Z}}) + pauli_string(n, {{n - 1, Pauli::Z}});
    case ObservableKind::CollectiveTransverse:
      return collective(n, Pauli::X) + cplx(0, 1) * collective(n, Pauli::Y);
    case ObservableKind::Custom:
      if (obs.matrix.rows() != (Eigen::Index{1} << n)) throw DimensionError("custom observable dimension mismatch");
      return obs.matrix;
    case ObservableKind::EndReadout:
      throw DomainError("EndReadout needs the dipolar dynamics; use end_selection_adjoint");
  }
  return {};
}

cplx measure_raw(const Operator& rho, const Operator& obs) { return trace_product(rho, obs); }

double normalization_reference(const Operator& rho0, const Operator& obs) {
  const cplx v = trace_product(rho0, obs);
  if (std::abs(v) > 1e-9 * rho0.norm() * obs.norm()) return v.real();
  return rho0.squaredNorm();
}

}  // namespace spinchain
