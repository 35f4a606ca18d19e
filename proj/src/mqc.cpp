#include "spinchain/mqc.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "spinchain/errors.hpp"

namespace spinchain {

double CoherenceSpectrum::at(std::size_t i, int n) const {
  if (n < -max_order || n > max_order) throw DomainError("coherence order outside -K..K");
  return intensities.at(i)[static_cast<std::size_t>(n + max_order)];
}

std::vector<double> CoherenceSpectrum::order(int n) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < times.size(); ++i) out.push_back(at(i, n));
  return out;
}

namespace {

// J_n of the 2K-point phase transform, read directly off the coherence-order
// histogram h_d = sum_{m_r - m_c = d} rho_rc O_cr. Orders fold modulo 2K and
// taking the real part of each phase signal pairs h_d with conj(h_-d).
std::vector<cplx> row_from_evolved(const Operator& rho_t, const Operator& obs_t, int n, int K, double norm) {
  const Eigen::Index d = rho_t.rows();
  std::vector<int> m2(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) m2[static_cast<std::size_t>(i)] = n - 2 * std::popcount(static_cast<std::uint64_t>(i));
  std::vector<cplx> hist(static_cast<std::size_t>(2 * n + 1), 0.0);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      hist[static_cast<std::size_t>((m2[static_cast<std::size_t>(r)] - m2[static_cast<std::size_t>(c)]) / 2 + n)] +=
          rho_t(r, c) * obs_t(c, r);
  const int m = 2 * K;
  std::vector<cplx> folded(static_cast<std::size_t>(m), 0.0);
  for (int q = -n; q <= n; ++q) folded[static_cast<std::size_t>(((q % m) + m) % m)] += hist[static_cast<std::size_t>(q + n)];
  std::vector<cplx> j(static_cast<std::size_t>(2 * K + 1));
  for (int order = -K; order <= K; ++order) {
    const auto a = folded[static_cast<std::size_t>(((order % m) + m) % m)];
    const auto b = folded[static_cast<std::size_t>(((-order % m) + m) % m)];
    j[static_cast<std::size_t>(order + K)] = 0.5 * (a + std::conj(b)) / norm;
  }
  // Orders +K and -K share one bin; split it evenly.
  const cplx edge = j[0];
  j[0] = 0.5 * edge;
  j[static_cast<std::size_t>(2 * K)] = 0.5 * edge;
  return j;
}

}  // namespace

std::vector<cplx> mqc_row(const Operator& rho0, const Operator& readout, const Propagator& dq, double t, int K,
                          double norm) {
  if (K < 1) throw DomainError("MQC needs K >= 1");
  if (!(t >= 0.0)) throw DomainError("MQC evolution time must be non-negative");
  return row_from_evolved(dq.evolve(rho0, t), dq.evolve(readout, t), dq.n_spins(), K, norm);
}

CoherenceSpectrum run_mqc_protocol(const Operator& rho0, const Operator& readout, const Propagator& dq,
                                   const std::vector<double>& times, int K, double alias_tol) {
  if (K < 1) throw DomainError("MQC needs K >= 1");
  if (dq.kind() != HamiltonianKind::DoubleQuantum) throw DomainError("MQC needs the DQ propagator");
  const double norm = normalization_reference(rho0, readout);
  if (norm == 0.0) throw NumericalError("MQC normalisation is zero");
  CoherenceSpectrum spec;
  spec.max_order = K;
  spec.times = times;
  const bool same_input = rho0 == readout;
  const Operator rho_eig = dq.to_eigenbasis(rho0);
  const Operator obs_eig = same_input ? Operator() : dq.to_eigenbasis(readout);
  double worst_alias = 0.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("MQC evolution time must be non-negative");
    Operator r = rho_eig;
    dq.apply_phases(r, t);
    const Operator rho_t = dq.from_eigenbasis(r);
    Operator obs_t;
    if (same_input) {
      obs_t = rho_t;
    } else {
      Operator o = obs_eig;
      dq.apply_phases(o, t);
      obs_t = dq.from_eigenbasis(o);
    }
    const auto row = row_from_evolved(rho_t, obs_t, dq.n_spins(), K, norm);
    std::vector<double> real_row;
    for (const auto& v : row) real_row.push_back(v.real());
    worst_alias = std::max(worst_alias, std::abs(row[static_cast<std::size_t>(2 * K)]));
    spec.intensities.push_back(std::move(real_row));
  }
  if (worst_alias > alias_tol) {
    std::ostringstream os;
    os << "order-" << K << " bin holds " << worst_alias << "; higher orders may be aliased, increase K";
    spec.warnings.push_back(os.str());
  }
  return spec;
}

}  // namespace spinchain
