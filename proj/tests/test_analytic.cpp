#include <doctest.h>

#include <cmath>

#include "spinchain/analytic.hpp"
#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/mqc.hpp"
#include "spinchain/propagator.hpp"
#include "spinchain/transport.hpp"

using namespace spinchain;
namespace an = spinchain::analytic;

namespace {

const double b_fap = -constants::fap_coupling;

std::vector<double> grid(int count, double step) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(i * step);
  return t;
}

}  // namespace

TEST_CASE("Bessel series equals the mode sum") {
  for (int n : {3, 6, 9}) {
    const an::HoppingModes modes(n);
    for (double t : {0.0, 1e-5, 7e-4})
      for (int j = 1; j <= n; ++j)
        for (int q = 1; q <= n; ++q)
          CHECK(std::abs(an::amplitude_series(j, q, t, n, b_fap) - modes.amplitude(j, q, t, b_fap)) < 1e-11);
  }
}

TEST_CASE("closed-form modes agree with numerical diagonalisation") {
  const an::HoppingModes closed(12);
  const auto num = an::HoppingModes::numerical(12);
  for (double t : {2e-5, 3e-4})
    for (int q = 1; q <= 12; ++q)
      CHECK(std::abs(closed.amplitude(3, q, t, b_fap) - num.amplitude(3, q, t, b_fap)) < 1e-12);
}

TEST_CASE("amplitude row is normalised") {
  const an::HoppingModes modes(20);
  for (double t : {0.0, 1e-4, 1e-3}) CHECK(modes.row(1, t, b_fap).squaredNorm() == doctest::Approx(1.0));
}

TEST_CASE("transport formulas agree with dense evolution") {
  struct Case {
    an::TransportCase c;
    NamedState init;
    bool end_readout;
    int n;
  };
  const Case cases[] = {
      {an::TransportCase::ThermalCollective, NamedState::Thermal, false, 6},
      {an::TransportCase::EndCollective, NamedState::EndPolarized, false, 6},
      {an::TransportCase::ThermalEnd, NamedState::Thermal, true, 6},
      {an::TransportCase::EndEnd, NamedState::EndPolarized, true, 7},
      {an::TransportCase::LogicalYCollective, NamedState::LogicalYL, false, 6},
  };
  for (const auto& cs : cases) {
    CAPTURE(an::to_string(an::formula_for(cs.c)));
    const auto spec = ChainSpec::nearest_neighbor(cs.n, b_fap);
    const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
    const Operator rho = DeviationOperator::named(cs.init, cs.n).matrix();
    const Operator obs = observable_matrix(cs.end_readout ? Observable::end_spins() : Observable::collective_z(), cs.n);
    const auto times = grid(40, 8e-6);
    const auto dense = dense_transport(rho, obs, dq, times);
    const auto formula = an::transport_curve(an::formula_for(cs.c), cs.n, b_fap, times);
    const auto ff = an::freefermion_transport(cs.n, b_fap, times, cs.c);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(formula.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-9).scale(1.0));
      CHECK(ff.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("end-end formula is not the modulus sum on even chains") {
  const int n = 6;
  const auto spec = ChainSpec::nearest_neighbor(n, b_fap);
  const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
  const Operator rho = DeviationOperator::named(NamedState::EndPolarized, n).matrix();
  const auto times = grid(30, 1e-5);
  const auto dense = dense_transport(rho, observable_matrix(Observable::end_spins(), n), dq, times);
  const an::HoppingModes modes(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(an::transport_value(an::TransportFormula::A3, n, b_fap, times[i]) ==
          doctest::Approx(dense.values[i]).epsilon(1e-9).scale(1.0));
    const double modulus = std::norm(modes.amplitude(1, 1, times[i], b_fap)) + std::norm(modes.amplitude(1, n, times[i], b_fap));
    worst = std::max(worst, std::abs(modulus - dense.values[i]));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("transport initial values") {
  CHECK(an::transport_value(an::TransportFormula::A1, 9, b_fap, 0.0) == doctest::Approx(1.0));
  CHECK(an::transport_value(an::TransportFormula::A2, 9, b_fap, 0.0) == doctest::Approx(1.0));
  CHECK(an::transport_value(an::TransportFormula::A3, 9, b_fap, 0.0) == doctest::Approx(1.0));
  CHECK(an::transport_value(an::TransportFormula::A4, 9, b_fap, 0.0) == doctest::Approx(0.0));
  CHECK(an::transport_value(an::TransportFormula::A4, 9, b_fap, 1e-5) ==
        doctest::Approx(-an::transport_value(an::TransportFormula::A4, 9, -b_fap, 1e-5)));
}

TEST_CASE("MQC formulas agree with the dense protocol") {
  struct Case {
    an::MqcFormula f;
    NamedState init;
    bool end_readout;
    int n;
  };
  const Case cases[] = {
      {an::MqcFormula::B1, NamedState::Thermal, false, 6},
      {an::MqcFormula::B2, NamedState::EndPolarized, false, 6},
      {an::MqcFormula::B3, NamedState::EndPolarized, true, 7},
      {an::MqcFormula::B4, NamedState::LogicalYL, false, 6},
  };
  for (const auto& cs : cases) {
    CAPTURE(an::to_string(cs.f));
    const auto spec = ChainSpec::nearest_neighbor(cs.n, b_fap);
    const Propagator dq(build_hamiltonian(spec, HamiltonianKind::DoubleQuantum));
    const Operator rho = DeviationOperator::named(cs.init, cs.n).matrix();
    const Operator obs = observable_matrix(cs.end_readout ? Observable::end_spins() : Observable::collective_z(), cs.n);
    const auto times = grid(12, 1.5e-5);
    const auto s = run_mqc_protocol(rho, obs, dq, times, 2 * cs.n);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto v = an::mqc_value(cs.f, cs.n, b_fap, times[i]);
      CHECK(v.j0 == doctest::Approx(s.at(i, 0)).epsilon(1e-9).scale(1.0));
      CHECK(v.j2 == doctest::Approx(s.at(i, 2)).epsilon(1e-9).scale(1.0));
      CHECK(v.j2 == doctest::Approx(s.at(i, -2)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("free-fermion transport scales to long chains") {
  const auto tr = an::freefermion_transport(2001, b_fap, grid(50, 2e-5), an::TransportCase::EndCollective);
  CHECK(tr.values.front() == doctest::Approx(1.0));
  for (double v : tr.values) CHECK(std::isfinite(v));
  CHECK(tr.meta["source"] == "freefermion");
}

TEST_CASE("single-excitation front travels at group velocity 2b") {
  const int n = 101;
  const double b = 1.0;
  const auto times = grid(4001, 0.005);
  const double t = an::front_arrival_time(n, b, 17, times);
  CHECK(t == doctest::Approx(8.385984).epsilon(1e-4));
  CHECK(std::abs(t - 8.0) / 8.0 < 0.05);
  const double later = an::front_arrival_time(n, b, 18, times);
  CHECK(later - t == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("formula names round trip") {
  for (auto f : {an::TransportFormula::A1, an::TransportFormula::A2, an::TransportFormula::A3, an::TransportFormula::A4})
    CHECK(an::transport_formula_from_string(an::to_string(f)) == f);
  for (auto f : {an::MqcFormula::B1, an::MqcFormula::B2, an::MqcFormula::B3, an::MqcFormula::B4})
    CHECK(an::mqc_formula_from_string(an::to_string(f)) == f);
  CHECK_THROWS_AS(an::transport_formula_from_string("A9"), ConfigError);
}
