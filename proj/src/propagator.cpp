#include "spinchain/propagator.hpp"

#include <numeric>
#include <string>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

// Complex sub-block a(rows, cols) split into real and imaginary parts.
void gather(const Operator& a, const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols,
            Eigen::MatrixXd& re, Eigen::MatrixXd& im) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  re.resize(nr, nc);
  im.resize(nr, nc);
  for (Eigen::Index c = 0; c < nc; ++c)
    for (Eigen::Index r = 0; r < nr; ++r) {
      const cplx v = a(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
      re(r, c) = v.real();
      im(r, c) = v.imag();
    }
}

}  // namespace

Propagator::Propagator(const Hamiltonian& h, int evolution_limit)
    : n_(h.n_spins), dim_(h.matrix.rows()), kind_(h.kind) {
  if (n_ > evolution_limit) {
    throw CapacityError("operator evolution for " + std::to_string(n_) + " spins exceeds the limit of " +
                        std::to_string(evolution_limit) +
                        "; raise the limit explicitly or use the free-fermion engine");
  }
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim_));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  for (Eigen::Index c = 0; c < dim_; ++c)
    for (Eigen::Index r = c + 1; r < dim_; ++r)
      if (h.matrix(r, c) != 0.0) {
        const Eigen::Index a = find_root(parent, r), b = find_root(parent, c);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<Eigen::Index> block_of_root(static_cast<std::size_t>(dim_), -1);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    const Eigen::Index root = find_root(parent, i);
    auto& slot = block_of_root[static_cast<std::size_t>(root)];
    if (slot < 0) {
      slot = static_cast<Eigen::Index>(blocks_.size());
      blocks_.emplace_back();
    }
    blocks_[static_cast<std::size_t>(slot)].states.push_back(i);
  }
  energies_.resize(dim_);
  Eigen::Index offset = 0;
  for (auto& blk : blocks_) {
    const auto m = static_cast<Eigen::Index>(blk.states.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r)
        sub(r, c) = h.matrix(blk.states[static_cast<std::size_t>(r)], blk.states[static_cast<std::size_t>(c)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigendecomposition failed");
    blk.vectors = es.eigenvectors();
    blk.energies = es.eigenvalues();
    blk.offset = offset;
    energies_.segment(offset, m) = blk.energies;
    offset += m;
  }
}

std::vector<char> Propagator::nonzero_pairs(const Operator& a) const {
  const std::size_t nb = blocks_.size();
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(dim_));
  for (std::size_t k = 0; k < nb; ++k)
    for (auto s : blocks_[k].states) block_of[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(k);
  std::vector<char> pairs(nb * nb, 0);
  for (Eigen::Index c = 0; c < dim_; ++c)
    for (Eigen::Index r = 0; r < dim_; ++r)
      if (a(r, c) != cplx(0.0))
        pairs[static_cast<std::size_t>(block_of[static_cast<std::size_t>(r)]) * nb +
              static_cast<std::size_t>(block_of[static_cast<std::size_t>(c)])] = 1;
  return pairs;
}

Operator Propagator::transform(const Operator& a, bool forward, const std::vector<char>* pairs) const {
  if (a.rows() != dim_ || a.cols() != dim_) throw DimensionError("operator dimension does not match the propagator");
  const std::size_t nb = blocks_.size();
  // The transform is real, so a Hermitian input gives a Hermitian output and
  // only block pairs with p <= q are computed.
  const bool hermitian = is_hermitian(a, 1e-13);
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t p = 0; p < nb; ++p)
    for (std::size_t q = hermitian ? p : 0; q < nb; ++q)
      if (pairs == nullptr || (*pairs)[p * nb + q] || (hermitian && (*pairs)[q * nb + p])) work.emplace_back(p, q);

  Operator out = Operator::Zero(dim_, dim_);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t w = 0; w < work.size(); ++w) {
    const Block& bp = blocks_[work[w].first];
    const Block& bq = blocks_[work[w].second];
    const auto np = static_cast<Eigen::Index>(bp.states.size());
    const auto nq = static_cast<Eigen::Index>(bq.states.size());
    Eigen::MatrixXd re, im;
    if (forward)
      gather(a, bp.states, bq.states, re, im);
    else {
      re = a.block(bp.offset, bq.offset, np, nq).real();
      im = a.block(bp.offset, bq.offset, np, nq).imag();
    }
    auto sandwich = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
      if (x.isZero(0.0)) return Eigen::MatrixXd::Zero(np, nq);
      if (forward) return bp.vectors.transpose() * x * bq.vectors;
      return bp.vectors * x * bq.vectors.transpose();
    };
    const Eigen::MatrixXd r2 = sandwich(re);
    const Eigen::MatrixXd i2 = sandwich(im);
    const bool mirror = hermitian && work[w].first != work[w].second;
    for (Eigen::Index c = 0; c < nq; ++c)
      for (Eigen::Index r = 0; r < np; ++r) {
        const cplx v(r2(r, c), i2(r, c));
        const Eigen::Index i = forward ? bp.offset + r : bp.states[static_cast<std::size_t>(r)];
        const Eigen::Index j = forward ? bq.offset + c : bq.states[static_cast<std::size_t>(c)];
        out(i, j) = v;
        if (mirror) out(j, i) = std::conj(v);
      }
  }
  return out;
}

Operator Propagator::to_eigenbasis(const Operator& a) const {
  const auto pairs = nonzero_pairs(a);
  return transform(a, true, &pairs);
}

Operator Propagator::from_eigenbasis(const Operator& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) throw DimensionError("operator dimension does not match the propagator");
  const std::size_t nb = blocks_.size();
  std::vector<char> pairs(nb * nb, 0);
  for (std::size_t p = 0; p < nb; ++p)
    for (std::size_t q = 0; q < nb; ++q) {
      const Block& bp = blocks_[p];
      const Block& bq = blocks_[q];
      pairs[p * nb + q] = !a.block(bp.offset, bq.offset, static_cast<Eigen::Index>(bp.states.size()),
                                   static_cast<Eigen::Index>(bq.states.size()))
                               .isZero(0.0);
    }
  return transform(a, false, &pairs);
}

void Propagator::apply_phases(Operator& x, double t) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionError("operator dimension does not match the propagator");
  Eigen::VectorXcd p(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) p(i) = std::polar(1.0, -energies_(i) * t);
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < dim_; ++c) {
    const cplx pc = std::conj(p(c));
    for (Eigen::Index r = 0; r < dim_; ++r) x(r, c) *= p(r) * pc;
  }
}

Operator Propagator::unitary(double t) const {
  Operator u = Operator::Zero(dim_, dim_);
  for (const auto& blk : blocks_) {
    const auto m = static_cast<Eigen::Index>(blk.states.size());
    Eigen::VectorXcd ph(m);
    for (Eigen::Index i = 0; i < m; ++i) ph(i) = std::polar(1.0, -blk.energies(i) * t);
    const Eigen::MatrixXcd vc = blk.vectors.cast<cplx>();
    const Eigen::MatrixXcd ub = vc * ph.asDiagonal() * vc.transpose();
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r) u(blk.states[static_cast<std::size_t>(r)], blk.states[static_cast<std::size_t>(c)]) = ub(r, c);
  }
  return u;
}

Operator Propagator::evolve(const Operator& rho, double t) const {
  Operator x = to_eigenbasis(rho);
  apply_phases(x, t);
  return from_eigenbasis(x);
}

DeviationOperator Propagator::evolve(const DeviationOperator& rho, double t) const {
  if (rho.n_spins() != n_) throw DimensionError("state and propagator have different spin counts");
  Operator m = evolve(rho.matrix(), t);
  m = 0.5 * (m + m.adjoint()).eval();
  return DeviationOperator::dense(std::move(m), rho.normalization());
}

std::vector<kernels::WeightBlock> Propagator::spectral_weights(const Operator& rho, const Operator& obs) const {
  if (rho.rows() != dim_ || obs.rows() != dim_) throw DimensionError("operator dimension does not match the propagator");
  const std::size_t nb = blocks_.size();
  auto pr = nonzero_pairs(rho);
  const auto po = nonzero_pairs(obs);
  std::vector<char> po_t(nb * nb, 0);
  for (std::size_t p = 0; p < nb; ++p)
    for (std::size_t q = 0; q < nb; ++q) {
      const bool both = pr[p * nb + q] && po[q * nb + p];
      pr[p * nb + q] = both;
      po_t[q * nb + p] = both;
    }
  const Operator rt = transform(rho, true, &pr);
  const Operator ot = transform(obs, true, &po_t);
  std::vector<kernels::WeightBlock> out;
  for (std::size_t p = 0; p < nb; ++p)
    for (std::size_t q = 0; q < nb; ++q) {
      if (!pr[p * nb + q]) continue;
      const Block& bp = blocks_[p];
      const Block& bq = blocks_[q];
      const auto np = static_cast<Eigen::Index>(bp.states.size());
      const auto nq = static_cast<Eigen::Index>(bq.states.size());
      kernels::WeightBlock wb;
      wb.w = rt.block(bp.offset, bq.offset, np, nq).cwiseProduct(ot.block(bq.offset, bp.offset, nq, np).transpose());
      wb.ea = bp.energies;
      wb.eb = bq.energies;
      out.push_back(std::move(wb));
    }
  return out;
}

std::vector<cplx> Propagator::expectation_sweep(const Operator& rho, const Operator& obs,
                                                const std::vector<double>& times) const {
  return kernels::phase_sweep(spectral_weights(rho, obs), times);
}

}  // namespace spinchain
