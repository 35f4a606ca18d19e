#include "spinchain/hamiltonian.hpp"

#include <string>

#include "spinchain/errors.hpp"

namespace spinchain {

const char* to_string(HamiltonianKind kind) {
  return kind == HamiltonianKind::Dipolar ? "dipolar" : "double_quantum";
}

Hamiltonian build_hamiltonian(const ChainSpec& spec, HamiltonianKind kind, int dense_limit) {
  const int n = spec.n_spins();
  if (n > dense_limit) {
    throw CapacityError("dense Hamiltonian for " + std::to_string(n) + " spins exceeds the limit of " +
                        std::to_string(dense_limit) +
                        "; use the free-fermion engine (freefermion_transport) for nearest-neighbour chains");
  }
  const auto d = static_cast<Eigen::Index>(spec.dimension());
  Hamiltonian h{kind, n, Eigen::MatrixXd::Zero(d, d)};
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      const double b = spec.coupling(j, l);
      if (b == 0.0) continue;
      const Eigen::Index mask = (Eigen::Index{1} << (n - 1 - j)) | (Eigen::Index{1} << (n - 1 - l));
      for (Eigen::Index i = 0; i < d; ++i) {
        const bool same = spin_bit(static_cast<std::size_t>(i), j, n) == spin_bit(static_cast<std::size_t>(i), l, n);
        if (kind == HamiltonianKind::Dipolar) {
          h.matrix(i, i) += same ? b : -b;
          if (!same) h.matrix(i ^ mask, i) -= b;
        } else if (same) {
          h.matrix(i ^ mask, i) += b;
        }
      }
    }
  }
  return h;
}

}  // namespace spinchain
