#include "spinchain/pulse_program.hpp"

#include "spinchain/errors.hpp"
#include "spinchain/kernels.hpp"

namespace spinchain {

namespace {

const Propagator& pick(const PropagatorSet& props, HamiltonianKind kind) {
  const Propagator* p = kind == HamiltonianKind::Dipolar ? props.dipolar : props.double_quantum;
  if (p == nullptr) throw DomainError(std::string("pulse program needs a ") + to_string(kind) + " propagator");
  return *p;
}

}  // namespace

RotationAxis shifted(const RotationAxis& axis, double phase_offset) {
  if (axis.kind == RotationAxis::Kind::Z) return axis;
  return RotationAxis::transverse(axis.phase + phase_offset);
}

PulseProgram::PulseProgram(std::vector<PulseStep> steps, std::vector<PhaseCycleEntry> cycle)
    : steps_(std::move(steps)), cycle_(std::move(cycle)) {
  for (const auto& s : steps_)
    if (const auto* f = std::get_if<FreeEvolution>(&s); f && !(f->duration >= 0.0))
      throw DomainError("free evolution duration must be non-negative");
  if (cycle_.empty()) cycle_.push_back({});
}

double PulseProgram::duration() const {
  double t = 0.0;
  for (const auto& s : steps_)
    if (const auto* f = std::get_if<FreeEvolution>(&s)) t += f->duration;
  return t;
}

Operator PulseProgram::apply(const Operator& rho, int n, const PropagatorSet& props) const {
  Operator acc = Operator::Zero(rho.rows(), rho.cols());
  for (const auto& entry : cycle_) {
    Operator x = rho;
    for (const auto& s : steps_) {
      if (const auto* r = std::get_if<Rotation>(&s)) {
        kernels::rotate_collective(x, n, rotation_matrix_2x2(shifted(r->axis, entry.phase_offset), r->angle));
      } else {
        const auto& f = std::get<FreeEvolution>(s);
        if (f.duration > 0.0) x = pick(props, f.hamiltonian).evolve(x, f.duration);
      }
    }
    acc += entry.weight * x;
  }
  return acc;
}

Operator PulseProgram::unitary(int n, const PropagatorSet& props, double phase_offset) const {
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Operator u = Operator::Identity(d, d);
  for (const auto& s : steps_) {
    if (const auto* r = std::get_if<Rotation>(&s)) {
      u = (collective_rotation(n, shifted(r->axis, phase_offset), r->angle) * u).eval();
    } else {
      const auto& f = std::get<FreeEvolution>(s);
      if (f.duration > 0.0) u = (pick(props, f.hamiltonian).unitary(f.duration) * u).eval();
    }
  }
  return u;
}

}  // namespace spinchain
