#include <doctest.h>

#include <cmath>

#include "spinchain/chain_spec.hpp"
#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/kernels.hpp"
#include "spinchain/state.hpp"

using namespace spinchain;

namespace {

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("coupling from fluorapatite geometry") {
  const double b = coupling_from_geometry(constants::fap_spacing, 0.0, constants::gamma_19F);
  CHECK(std::abs(std::abs(b) - 8.17e3) / 8.17e3 < 0.01);
  CHECK(b < 0.0);
  CHECK(std::abs(coupling_from_geometry(1e-9, std::acos(1.0 / std::sqrt(3.0)), constants::gamma_19F)) < 1e-12);
  const double cross = coupling_from_geometry(constants::fap_chain_separation, constants::pi / 2, constants::gamma_19F);
  CHECK(std::abs(b / cross) == doctest::Approx(40.3).epsilon(0.01));
  CHECK_THROWS_AS(coupling_from_geometry(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(coupling_from_geometry(-1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("chain spec invariants and json round trip") {
  const auto nn = ChainSpec::nearest_neighbor(5, 2.0);
  CHECK(nn.is_nearest_neighbor_uniform());
  CHECK(nn.couplings().isApprox(nn.couplings().transpose()));
  CHECK(nn.couplings().diagonal().isZero());

  ChainGeometry g{constants::fap_spacing, 0.0, constants::gamma_19F, false};
  const auto geo = ChainSpec::geometric(6, g);
  CHECK_FALSE(geo.is_nearest_neighbor_uniform());
  CHECK(geo.coupling(0, 2) == doctest::Approx(geo.coupling(0, 1) / 8.0));
  const auto trunc = geo.truncated_to_nearest_neighbor();
  CHECK(trunc.is_nearest_neighbor_uniform());
  CHECK(trunc.nn_coupling() == doctest::Approx(coupling_from_geometry(g.spacing_m, 0.0, g.gamma)));

  const auto back = chain_spec_from_json(to_json(geo));
  CHECK(back.couplings().isApprox(geo.couplings(), 1e-14));
  const auto back_nn = chain_spec_from_json(to_json(nn));
  CHECK(back_nn.couplings().isApprox(nn.couplings()));
  CHECK_THROWS_AS(chain_spec_from_json(nlohmann::json{{"model", "nn"}}), ConfigError);
  CHECK_THROWS_AS(chain_spec_from_json(nlohmann::json{{"n_spins", 3}, {"model", "ring"}}), ConfigError);
}

TEST_CASE("two-spin DQ Hamiltonian couples only 00 and 11") {
  const auto h = build_hamiltonian(ChainSpec::nearest_neighbor(2, 3.0), HamiltonianKind::DoubleQuantum);
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(0, 3) = expected(3, 0) = 3.0;
  CHECK(h.matrix.isApprox(expected));
}

TEST_CASE("single spin Hamiltonians vanish") {
  for (auto kind : {HamiltonianKind::Dipolar, HamiltonianKind::DoubleQuantum})
    CHECK(build_hamiltonian(ChainSpec::nearest_neighbor(1, 1.0), kind).matrix.isZero());
}

TEST_CASE("Hamiltonians match Pauli-string definitions") {
  ChainGeometry g{constants::fap_spacing, 0.3, constants::gamma_19F, false};
  const auto spec = ChainSpec::geometric(4, g);
  const int n = 4;
  Operator dip = Operator::Zero(16, 16), dq = Operator::Zero(16, 16);
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) {
      const double b = spec.coupling(j, l);
      const Operator xx = pauli_string(n, {{j, Pauli::X}, {l, Pauli::X}});
      const Operator yy = pauli_string(n, {{j, Pauli::Y}, {l, Pauli::Y}});
      const Operator zz = pauli_string(n, {{j, Pauli::Z}, {l, Pauli::Z}});
      dip += b * (zz - 0.5 * (xx + yy));
      dq += 0.5 * b * (xx - yy);
    }
  CHECK((build_hamiltonian(spec, HamiltonianKind::Dipolar).complex_matrix() - dip).norm() < 1e-9 * dip.norm());
  CHECK((build_hamiltonian(spec, HamiltonianKind::DoubleQuantum).complex_matrix() - dq).norm() < 1e-9 * dq.norm());
}

TEST_CASE("symmetries of the Hamiltonians") {
  const auto spec = ChainSpec::nearest_neighbor(3, 1.7);
  const Operator z = collective(3, Pauli::Z);
  const Operator dip = build_hamiltonian(spec, HamiltonianKind::Dipolar).complex_matrix();
  CHECK(commutator(dip, z).norm() < 1e-12);
  CHECK(is_hermitian(dip));
  for (int n = 2; n <= 8; ++n) {
    ChainGeometry g{constants::fap_spacing, 0.0, constants::gamma_19F, false};
    const Operator dq = build_hamiltonian(ChainSpec::geometric(n, g), HamiltonianKind::DoubleQuantum).complex_matrix();
    Operator parity = Operator::Identity(dq.rows(), dq.cols());
    for (int j = 0; j < n; ++j) parity = parity * pauli_string(n, {{j, Pauli::Z}});
    CHECK(commutator(dq, parity).norm() < 1e-12 * dq.norm());
    CHECK(is_hermitian(dq));
  }
}

TEST_CASE("dense limit raises a capacity error naming the free-fermion path") {
  const auto spec = ChainSpec::nearest_neighbor(15, 1.0);
  try {
    build_hamiltonian(spec, HamiltonianKind::DoubleQuantum);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("free-fermion") != std::string::npos);
  }
}

TEST_CASE("named initial states") {
  const auto spec3 = ChainSpec::nearest_neighbor(3, 1.0);
  const auto th = initial_state(NamedState::Thermal, spec3).matrix();
  for (Eigen::Index i = 0; i < 8; ++i) {
    const int ones = std::popcount(static_cast<unsigned>(i));
    CHECK(th(i, i).real() == doctest::Approx(3 - 2 * ones));
  }
  CHECK(th.isDiagonal());

  const auto spec2 = ChainSpec::nearest_neighbor(2, 1.0);
  CHECK(initial_state(NamedState::EndPolarized, spec2).matrix().isApprox(initial_state(NamedState::Thermal, spec2).matrix()));
  CHECK_THROWS_AS(initial_state(NamedState::EndPolarized, ChainSpec::nearest_neighbor(1, 1.0)), DomainError);
  CHECK_THROWS_AS(initial_state(NamedState::LogicalYL, ChainSpec::nearest_neighbor(3, 1.0)), DomainError);

  const auto spec4 = ChainSpec::nearest_neighbor(4, 1.0);
  for (auto s : {NamedState::Thermal, NamedState::EndPolarized, NamedState::LogicalXL, NamedState::LogicalYL,
                 NamedState::LogicalZL}) {
    const auto rho = initial_state(s, spec4).matrix();
    CHECK(is_hermitian(rho));
    CHECK(std::abs(rho.trace()) < 1e-12);
  }
}

TEST_CASE("logical yL rotates into xL under a z rotation") {
  const int n = 4;
  const auto y = DeviationOperator::named(NamedState::LogicalYL, n).matrix();
  const auto x = DeviationOperator::named(NamedState::LogicalXL, n).matrix();
  for (double phi : {0.0, 0.3, 1.1, 2.0}) {
    Operator r = y;
    kernels::apply_z_phase(r, n, phi);
    CHECK((r - (std::cos(2 * phi) * y - std::sin(2 * phi) * x)).norm() < 1e-12);
  }
}

TEST_CASE("observables and measurement") {
  const int n = 4;
  const auto z = observable_matrix(Observable::collective_z(), n);
  const auto th = DeviationOperator::named(NamedState::Thermal, n).matrix();
  const auto end = DeviationOperator::named(NamedState::EndPolarized, n).matrix();
  CHECK(measure_raw(th, z).real() == doctest::Approx(n * 16.0));
  CHECK(measure_raw(end, z).real() == doctest::Approx(2 * 16.0));
  CHECK(measure_raw(th, z).real() / normalization_reference(th, z) == doctest::Approx(1.0));
  CHECK(std::abs(measure_raw(pauli_string(n, {{0, Pauli::X}}), pauli_string(n, {{1, Pauli::Y}}))) < 1e-14);
  CHECK_THROWS_AS(Observable::custom(pauli_string(n, {{0, Pauli::X}}) * cplx(0, 1)), DomainError);
  CHECK_NOTHROW(Observable::custom(pauli_string(n, {{0, Pauli::X}})));
}
