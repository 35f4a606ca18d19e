#include <doctest.h>

#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/mqc.hpp"
#include "spinchain/propagator.hpp"
#include "spinchain/protocols.hpp"
#include "spinchain/transport.hpp"

using namespace spinchain;

namespace {

const double b_fap = -constants::fap_coupling;

Operator random_hermitian(Eigen::Index d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Operator m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

Operator expm_reference(const Hamiltonian& h, double t) {
  Operator a = cplx(0, -t) * h.complex_matrix();
  return a.exp();
}

}  // namespace

TEST_CASE("propagator agrees with the matrix exponential") {
  for (auto kind : {HamiltonianKind::Dipolar, HamiltonianKind::DoubleQuantum}) {
    ChainGeometry g{constants::fap_spacing, 0.0, constants::gamma_19F, false};
    const auto h = build_hamiltonian(ChainSpec::geometric(5, g), kind);
    const Propagator p(h);
    for (double t : {0.0, 3e-6, 41e-6}) {
      const Operator u = p.unitary(t);
      CHECK((u - expm_reference(h, t)).norm() < 1e-10);
      CHECK((u * u.adjoint() - Operator::Identity(32, 32)).norm() < 1e-10);
    }
  }
}

TEST_CASE("block structure follows the symmetry sectors") {
  const auto spec = ChainSpec::nearest_neighbor(6, 1.0);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  CHECK(dip.blocks().size() == 7);
  CHECK(dq.blocks().size() == 7);
  ChainGeometry g{constants::fap_spacing, 0.0, constants::gamma_19F, false};
  const Propagator dq_full(build_hamiltonian(ChainSpec::geometric(6, g), HamiltonianKind::DoubleQuantum));
  CHECK(dq_full.blocks().size() == 2);
}

TEST_CASE("evolution limit raises a capacity error") {
  const auto h = build_hamiltonian(ChainSpec::nearest_neighbor(6, 1.0), HamiltonianKind::Dipolar);
  CHECK_THROWS_AS(Propagator(h, 5), CapacityError);
}

TEST_CASE("evolution preserves trace and purity") {
  const auto spec = ChainSpec::nearest_neighbor(5, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator rho = random_hermitian(32, 7);
  for (double t : {1e-6, 1e-4}) {
    const Operator r = dq.evolve(rho, t);
    CHECK(std::abs(r.trace() - rho.trace()) < 1e-10);
    CHECK(std::abs(r.squaredNorm() - rho.squaredNorm()) < 1e-9 * rho.squaredNorm());
  }
}

TEST_CASE("expectation sweep matches direct evolution") {
  const auto spec = ChainSpec::nearest_neighbor(5, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator rho = random_hermitian(32, 11);
  const Operator obs = random_hermitian(32, 12);
  std::vector<double> times;
  for (int i = 0; i < 150; ++i) times.push_back(i * 1.3e-6);
  const auto sweep = dq.expectation_sweep(rho, obs, times);
  for (std::size_t i = 0; i < times.size(); i += 17)
    CHECK(std::abs(sweep[i] - trace_product(dq.evolve(rho, times[i]), obs)) < 1e-9);
}

TEST_CASE("parallel kernels agree with the serial references") {
  const int n = 5;
  const Operator rho = random_hermitian(32, 3);
  for (auto axis : {RotationAxis::x(), RotationAxis::y(), RotationAxis::transverse(0.7), RotationAxis::z()}) {
    Operator a = rho, r = rho;
    const auto u = rotation_matrix_2x2(axis, 1.1);
    kernels::rotate_collective(a, n, u);
    kernels::rotate_collective_reference(r, n, u);
    CHECK((a - r).norm() < 1e-12);
  }
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const auto w = dq.spectral_weights(rho, random_hermitian(32, 4));
  std::vector<double> times;
  for (int i = 0; i < 130; ++i) times.push_back(i * 2e-6);
  const auto fast = kernels::phase_sweep(w, times);
  const auto ref = kernels::phase_sweep_reference(w, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(fast[i] - ref[i]) < 1e-9);
}

TEST_CASE("pulse rotations") {
  const int n = 3;
  const Operator z = collective(n, Pauli::Z);
  const Operator x = collective(n, Pauli::X);
  const Operator y = collective(n, Pauli::Y);
  const Operator ry = collective_rotation(n, RotationAxis::y(), constants::pi / 2);
  CHECK((ry * z * ry.adjoint() - x).norm() < 1e-12);
  const Operator rx = collective_rotation(n, RotationAxis::x(), constants::pi / 2);
  CHECK((rx * z * rx.adjoint() + y).norm() < 1e-12);
}

TEST_CASE("eight-pulse sequence approximates DQ evolution") {
  const auto spec = ChainSpec::nearest_neighbor(4, b_fap);
  const double d1 = run_eight_pulse_check(spec, 1e-6, 1);
  CHECK(d1 == doctest::Approx(7.169641849913513e-05).epsilon(1e-6));
  const double d2 = run_eight_pulse_check(spec, 0.5e-6, 1);
  CHECK(d2 < d1 / 6.0);
  CHECK(eight_pulse_program(1e-6).duration() == doctest::Approx(12e-6));
}

TEST_CASE("end selection on the thermal state") {
  const auto spec = ChainSpec::nearest_neighbor(11, b_fap);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Operator at0 = run_end_selection(dip, 0.0);
  CHECK((at0 - DeviationOperator::named(NamedState::Thermal, 11).matrix()).norm() < 1e-9);
  CHECK(end_state_fidelity(at0, 11) == doctest::Approx(2.0 / 11.0));
  CHECK(end_state_fidelity(run_end_selection(dip, 30e-6), 11) == doctest::Approx(0.2459).epsilon(5e-4));
  CHECK(end_state_fidelity(run_end_selection(dip, 45e-6), 11) == doctest::Approx(0.1394).epsilon(5e-4));

  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(i * 5e-6);
  const auto opt = optimal_end_selection_time(dip, grid);
  CHECK(opt.t1 == doctest::Approx(30e-6));
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < opt.fidelities.size(); ++i)
    if (opt.fidelities[i] > opt.fidelities[i - 1] && opt.fidelities[i] > opt.fidelities[i + 1]) ++maxima;
  CHECK(maxima == 1);
}

TEST_CASE("two-step end selection removes orders 2 mod 4") {
  const int n = 6;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Operator out = run_end_selection(dip, 30e-6);
  const Operator bad = coherence_filter(out, n, [](int m) { return ((m % 4) + 4) % 4 == 2; });
  CHECK(bad.norm() < 1e-10 * out.norm());
  const Operator zq = run_end_selection(dip, 30e-6, EndSelectionCycle::ZeroQuantum);
  const Operator z = collective(n, Pauli::Z);
  CHECK((zq * z - z * zq).norm() < 1e-10 * zq.norm());
}

TEST_CASE("end selection generic program matches the cached selector") {
  const int n = 5;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Operator th = DeviationOperator::named(NamedState::Thermal, n).matrix();
  for (auto cycle : {EndSelectionCycle::TwoStep, EndSelectionCycle::ZeroQuantum}) {
    const Operator generic = end_selection_program(25e-6, n, cycle).apply(th, n, {&dip, nullptr});
    CHECK((generic - run_end_selection(dip, 25e-6, cycle)).norm() < 1e-9 * generic.norm());
  }
}

TEST_CASE("end selection adjoint") {
  const int n = 5;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Operator rho = random_hermitian(32, 21);
  const Operator obs = collective(n, Pauli::Z);
  const Operator fwd = EndSelector(dip, rho).apply(20e-6);
  const Operator adj = end_selection_adjoint(dip, 20e-6, obs);
  CHECK(std::abs(trace_product(fwd, obs) - trace_product(rho, adj)) < 1e-9);
}

TEST_CASE("DQ filter keeps orders 2 mod 4") {
  const int n = 4;
  const Operator rho = random_hermitian(16, 5);
  const Operator f = run_dq_filter(rho, n);
  const Operator expected = coherence_filter(rho, n, [](int m) { return ((m % 4) + 4) % 4 == 2; });
  CHECK((f - expected).norm() < 1e-12);
}

TEST_CASE("logical state preparation") {
  const int n = 8;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const double t_short = 0.3 / constants::fap_coupling;

  const Operator ideal = DeviationOperator::named(NamedState::EndPolarized, n).matrix();
  for (auto kind : {NamedState::LogicalYL, NamedState::LogicalXL}) {
    const auto prepared = prepare_logical_from(ideal, dq, kind, t_short);
    const Operator target = DeviationOperator::named(kind, n).matrix();
    CHECK(normalized_overlap(prepared.matrix(), target) > 0.9);
    CHECK(prepared.matrix().norm() == doctest::Approx(target.norm()));
  }

  const auto from_p1 = prepare_logical(dip, dq, NamedState::LogicalYL, t_short, 31e-6);
  CHECK(normalized_overlap(from_p1.matrix(), DeviationOperator::named(NamedState::LogicalYL, n).matrix()) ==
        doctest::Approx(0.659).epsilon(0.01));
}

TEST_CASE("raw DQ overlap with yL has the sign of -b") {
  const int n = 6;
  for (double b : {b_fap, -b_fap}) {
    const auto spec = ChainSpec::nearest_neighbor(n, b);
    const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
    const Operator ideal = DeviationOperator::named(NamedState::EndPolarized, n).matrix();
    const Operator raw = run_dq_filter(dq.evolve(ideal, 0.2 / std::abs(b)), n);
    const double ov = normalized_overlap(raw, DeviationOperator::named(NamedState::LogicalYL, n).matrix());
    CHECK(std::abs(ov) > 0.5);
    CHECK(ov * b < 0.0);
  }
}

TEST_CASE("MQC intensities sum to one and the thermal state has only 0, +-2") {
  const int n = 6;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator th = DeviationOperator::named(NamedState::Thermal, n).matrix();
  const Operator z = collective(n, Pauli::Z);
  const std::vector<double> times{0.0, 20e-6, 80e-6};
  const auto s = run_mqc_protocol(th, z, dq, times, 8);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sum = 0.0;
    for (int k = -8; k <= 8; ++k) sum += s.at(i, k);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.at(i, 2) == doctest::Approx(s.at(i, -2)).epsilon(1e-10));
  }
  CHECK(s.at(0, 0) == doctest::Approx(1.0));
  CHECK(s.warnings.empty());
}

TEST_CASE("MQC aliasing warning for a small phase count") {
  const int n = 6;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator th = DeviationOperator::named(NamedState::Thermal, n).matrix();
  const auto s = run_mqc_protocol(th, collective(n, Pauli::Z), dq, {200e-6}, 2);
  CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("dense transport starts at one for the thermal state") {
  const int n = 5;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator th = DeviationOperator::named(NamedState::Thermal, n).matrix();
  const auto tr = dense_transport(th, collective(n, Pauli::Z), dq, {0.0, 1e-5});
  CHECK(tr.values[0] == doctest::Approx(1.0));
  CHECK(tr.values[1] < 1.0);
}
