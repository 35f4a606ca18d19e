#include "spinchain/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace spinchain::kernels {

namespace {

constexpr Eigen::Index sweep_chunk = 64;

}  // namespace

void rotate_collective(Operator& rho, int n, const std::array<cplx, 4>& u) {
  const Eigen::Index d = rho.rows();
  const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
  const cplx c00 = std::conj(u00), c01 = std::conj(u01), c10 = std::conj(u10), c11 = std::conj(u11);
  for (int site = 0; site < n; ++site) {
    const Eigen::Index mask = Eigen::Index{1} << (n - 1 - site);
    // left factor acts on rows
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < d; ++c) {
      cplx* col = rho.col(c).data();
      for (Eigen::Index r = 0; r < d; ++r) {
        if (r & mask) continue;
        const cplx x0 = col[r], x1 = col[r | mask];
        col[r] = u00 * x0 + u01 * x1;
        col[r | mask] = u10 * x0 + u11 * x1;
      }
    }
    // right factor u^dagger acts on columns
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < d; ++c) {
      if (c & mask) continue;
      cplx* a = rho.col(c).data();
      cplx* b = rho.col(c | mask).data();
      for (Eigen::Index r = 0; r < d; ++r) {
        const cplx x0 = a[r], x1 = b[r];
        a[r] = x0 * c00 + x1 * c01;
        b[r] = x0 * c10 + x1 * c11;
      }
    }
  }
}

void rotate_collective_reference(Operator& rho, int n, const std::array<cplx, 4>& u) {
  Eigen::Matrix2cd u2;
  u2 << u[0], u[1], u[2], u[3];
  Operator r = Operator::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    Operator next(r.rows() * 2, r.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * r.rows(), b * r.cols(), r.rows(), r.cols()) = u2(a, b) * r;
    r = std::move(next);
  }
  rho = r * rho * r.adjoint();
}

void apply_z_phase(Operator& rho, int n, double phi) {
  const Eigen::Index d = rho.rows();
  std::vector<cplx> p(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const int m2 = n - 2 * std::popcount(static_cast<std::size_t>(i));  // 2 m_i
    p[static_cast<std::size_t>(i)] = std::polar(1.0, -phi * m2 / 2.0);
  }
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < d; ++c) {
    const cplx pc = std::conj(p[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < d; ++r) rho(r, c) *= p[static_cast<std::size_t>(r)] * pc;
  }
}

std::vector<cplx> phase_sweep(const std::vector<WeightBlock>& blocks, const std::vector<double>& times) {
  const auto nt = static_cast<Eigen::Index>(times.size());
  std::vector<cplx> out(times.size(), cplx(0.0));
  const Eigen::Index n_chunks = (nt + sweep_chunk - 1) / sweep_chunk;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index chunk = 0; chunk < n_chunks; ++chunk) {
    const Eigen::Index t0 = chunk * sweep_chunk;
    const Eigen::Index len = std::min(sweep_chunk, nt - t0);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(len);
    for (const auto& blk : blocks) {
      Eigen::MatrixXcd pa(len, blk.ea.size());
      Eigen::MatrixXcd pb(len, blk.eb.size());
      for (Eigen::Index k = 0; k < len; ++k) {
        const double t = times[static_cast<std::size_t>(t0 + k)];
        for (Eigen::Index a = 0; a < blk.ea.size(); ++a) pa(k, a) = std::polar(1.0, -blk.ea(a) * t);
        for (Eigen::Index b = 0; b < blk.eb.size(); ++b) pb(k, b) = std::polar(1.0, blk.eb(b) * t);
      }
      const Eigen::MatrixXcd pw = pa * blk.w;
      acc += pw.cwiseProduct(pb).rowwise().sum();
    }
    for (Eigen::Index k = 0; k < len; ++k) out[static_cast<std::size_t>(t0 + k)] = acc(k);
  }
  return out;
}

std::vector<cplx> phase_sweep_reference(const std::vector<WeightBlock>& blocks, const std::vector<double>& times) {
  std::vector<cplx> out(times.size(), cplx(0.0));
  for (std::size_t k = 0; k < times.size(); ++k) {
    cplx s = 0.0;
    for (const auto& blk : blocks)
      for (Eigen::Index b = 0; b < blk.eb.size(); ++b)
        for (Eigen::Index a = 0; a < blk.ea.size(); ++a)
          s += blk.w(a, b) * std::exp(cplx(0.0, -(blk.ea(a) - blk.eb(b)) * times[k]));
    out[k] = s;
  }
  return out;
}

}  // namespace spinchain::kernels
