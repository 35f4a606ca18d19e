#include "spinchain/protocols.hpp"

#include <cmath>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/kernels.hpp"

namespace spinchain {

namespace {

using constants::pi;

bool commutes_with_total_z(const Operator& a, int n) {
  const double scale = std::max(a.norm(), 1e-300);
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      if (std::abs(a(r, c)) > 1e-14 * scale &&
          coherence_order(static_cast<std::size_t>(r), static_cast<std::size_t>(c), n) != 0)
        return false;
  return true;
}

Operator thermal(int n) { return total_z_diagonal(n).cast<cplx>().asDiagonal(); }

}  // namespace

const char* to_string(EndSelectionCycle c) { return c == EndSelectionCycle::TwoStep ? "two_step" : "zero_quantum"; }

std::vector<double> end_selection_phases(EndSelectionCycle cycle, int n) {
  if (cycle == EndSelectionCycle::TwoStep) return {0.0, pi / 2};
  const int m = n + 1;
  std::vector<double> p(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k)] = 2.0 * pi * k / m;
  return p;
}

PulseProgram end_selection_program(double t1, int n, EndSelectionCycle cycle) {
  const auto phases = end_selection_phases(cycle, n);
  std::vector<PhaseCycleEntry> entries;
  for (double p : phases) entries.push_back({p, cplx(1.0 / static_cast<double>(phases.size()))});
  return PulseProgram({Rotation{RotationAxis::x(), pi / 2}, FreeEvolution{HamiltonianKind::Dipolar, t1},
                       Rotation{RotationAxis::minus_x(), pi / 2}},
                      std::move(entries));
}

EndSelector::EndSelector(const Propagator& dipolar, const Operator& input, EndSelectionCycle cycle)
    : prop_(&dipolar), cycle_(cycle), phases_(end_selection_phases(cycle, dipolar.n_spins())) {
  if (dipolar.kind() != HamiltonianKind::Dipolar) throw DomainError("end selection needs the dipolar propagator");
  const int n = dipolar.n_spins();
  z_symmetric_ = commutes_with_total_z(input, n);
  const std::size_t needed = z_symmetric_ ? 1 : phases_.size();
  for (std::size_t k = 0; k < needed; ++k) {
    Operator x = input;
    kernels::rotate_collective(x, n, rotation_matrix_2x2(RotationAxis::transverse(phases_[k]), pi / 2));
    branches_.push_back(prop_->to_eigenbasis(x));
  }
}

Operator EndSelector::apply(double t1) const {
  const int n = prop_->n_spins();
  auto branch = [&](std::size_t k) {
    Operator x = branches_[k];
    prop_->apply_phases(x, t1);
    x = prop_->from_eigenbasis(x);
    kernels::rotate_collective(x, n, rotation_matrix_2x2(RotationAxis::transverse(phases_[k] + pi), pi / 2));
    return x;
  };
  const double w = 1.0 / static_cast<double>(phases_.size());
  Operator out;
  if (z_symmetric_) {
    // Branch k is the first branch conjugated by a z rotation through phases_[k].
    const Operator x0 = branch(0);
    const Eigen::Index d = x0.rows();
    out.resize(d, d);
    std::vector<int> m2(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) m2[static_cast<std::size_t>(i)] = n - 2 * std::popcount(static_cast<std::size_t>(i));
    // Cycle factor for each coherence order, indexed by 2 dm + 2n.
    std::vector<cplx> factor(static_cast<std::size_t>(4 * n + 1), cplx(0.0));
    for (int k = 0; k <= 4 * n; ++k)
      for (double p : phases_) factor[static_cast<std::size_t>(k)] += std::polar(w, -p * 0.5 * (k - 2 * n));
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r)
        out(r, c) = x0(r, c) * factor[static_cast<std::size_t>(m2[static_cast<std::size_t>(r)] - m2[static_cast<std::size_t>(c)] + 2 * n)];
  } else {
    out = w * branch(0);
    for (std::size_t k = 1; k < phases_.size(); ++k) out += w * branch(k);
  }
  return 0.5 * (out + out.adjoint());
}

Operator run_end_selection(const Propagator& dipolar, double t1, EndSelectionCycle cycle) {
  if (!(t1 >= 0.0)) throw DomainError("end-selection time must be non-negative");
  return EndSelector(dipolar, thermal(dipolar.n_spins()), cycle).apply(t1);
}

Operator end_selection_adjoint(const Propagator& dipolar, double t1, const Operator& obs, EndSelectionCycle cycle) {
  if (!(t1 >= 0.0)) throw DomainError("end-selection time must be non-negative");
  return EndSelector(dipolar, obs, cycle).apply(-t1);
}

double end_state_fidelity(const Operator& rho, int n) {
  if (n < 2) throw DomainError("end-state fidelity needs N >= 2");
  const Eigen::VectorXd e = z_diagonal(n, 0, 0) + z_diagonal(n, n - 1, n - 1);
  const double overlap = (rho.diagonal().real().array() * e.array()).sum();
  const double norm = rho.squaredNorm() * e.squaredNorm();
  return norm > 0.0 ? overlap * overlap / norm : 0.0;
}

std::vector<double> default_end_selection_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 60; ++k) g.push_back(k * 1e-6);
  return g;
}

EndSelectionOptimum optimal_end_selection_time(const Propagator& dipolar, const std::vector<double>& grid,
                                               EndSelectionCycle cycle) {
  if (grid.empty()) throw DomainError("empty t1 grid");
  EndSelector sel(dipolar, thermal(dipolar.n_spins()), cycle);
  EndSelectionOptimum opt;
  opt.grid = grid;
  for (double t1 : grid) {
    if (!(t1 >= 0.0)) throw DomainError("end-selection time must be non-negative");
    opt.fidelities.push_back(end_state_fidelity(sel.apply(t1), dipolar.n_spins()));
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (opt.fidelities[k] > opt.fidelities[best]) best = k;
  opt.t1 = grid[best];
  opt.fidelity = opt.fidelities[best];
  return opt;
}

Operator run_dq_filter(const Operator& rho, int n, int phase_steps) {
  if (phase_steps < 1) throw DomainError("DQ filter needs at least one phase step");
  Operator acc = Operator::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < phase_steps; ++k) {
    const double phi = 2.0 * pi * k / phase_steps;
    Operator x = rho;
    kernels::apply_z_phase(x, n, phi);
    acc += std::polar(1.0 / phase_steps, 2.0 * phi) * x;
  }
  return 0.5 * (acc + acc.adjoint());
}

double normalized_overlap(const Operator& a, const Operator& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return trace_product(a, b).real() / (na * nb);
}

DeviationOperator prepare_logical_from(const Operator& start, const Propagator& dq, NamedState kind, double t_short) {
  if (kind != NamedState::LogicalXL && kind != NamedState::LogicalYL)
    throw DomainError("prepare_logical supports xL and yL");
  if (dq.kind() != HamiltonianKind::DoubleQuantum) throw DomainError("prepare_logical needs the DQ propagator");
  const int n = dq.n_spins();
  if (n < 4) throw DomainError("logical state preparation needs N >= 4");
  Operator x = dq.evolve(start, t_short);
  if (kind == NamedState::LogicalXL) kernels::apply_z_phase(x, n, pi / 4);
  x = run_dq_filter(x, n);
  const Operator target = DeviationOperator::named(kind, n).matrix();
  const double nx = x.norm();
  if (nx == 0.0) throw NumericalError("DQ filter removed the whole state; increase t_short");
  double scale = target.norm() / nx;
  if (trace_product(x, target).real() < 0.0) scale = -scale;
  x *= scale;
  return DeviationOperator::dense(0.5 * (x + x.adjoint()));
}

DeviationOperator prepare_logical(const Propagator& dipolar, const Propagator& dq, NamedState kind, double t_short,
                                  double t1) {
  if (dipolar.n_spins() < 4) throw DomainError("logical state preparation needs N >= 4");
  return prepare_logical_from(run_end_selection(dipolar, t1), dq, kind, t_short);
}

DeviationOperator prepare_logical(const Propagator& dipolar, const Propagator& dq, NamedState kind, double t_short) {
  if (dipolar.n_spins() < 4) throw DomainError("logical state preparation needs N >= 4");
  const auto opt = optimal_end_selection_time(dipolar, default_end_selection_grid());
  return prepare_logical(dipolar, dq, kind, t_short, opt.t1);
}

PulseProgram eight_pulse_program(double delay) {
  if (!(delay > 0.0)) throw DomainError("eight-pulse delay must be positive");
  std::vector<PulseStep> steps;
  for (double phi : {pi / 2, -pi / 2, -pi / 2, pi / 2}) {
    steps.emplace_back(FreeEvolution{HamiltonianKind::Dipolar, delay / 2});
    steps.emplace_back(Rotation{RotationAxis::transverse(phi), pi / 2});
    steps.emplace_back(FreeEvolution{HamiltonianKind::Dipolar, 2 * delay});
    steps.emplace_back(Rotation{RotationAxis::transverse(phi + pi), pi / 2});
    steps.emplace_back(FreeEvolution{HamiltonianKind::Dipolar, delay / 2});
  }
  return PulseProgram(std::move(steps));
}

double run_eight_pulse_check(const ChainSpec& spec, double delay, int n_loops) {
  if (n_loops < 1) throw DomainError("eight-pulse check needs at least one loop");
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const PulseProgram prog = eight_pulse_program(delay);
  const Operator cycle = prog.unitary(spec.n_spins(), {&dip, nullptr});
  Operator total = Operator::Identity(cycle.rows(), cycle.cols());
  for (int k = 0; k < n_loops; ++k) total = (cycle * total).eval();
  return (total - dq.unitary(prog.duration() * n_loops)).norm();
}

}  // namespace spinchain
