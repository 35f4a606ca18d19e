#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spinchain/analytic.hpp"
#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/fitting.hpp"

using namespace spinchain;

namespace {

const double b_fap = constants::fap_coupling;

std::vector<double> times(int count, double step) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(i * step);
  return t;
}

std::vector<double> generate(const std::string& id, int n, const std::vector<double>& truth, const std::vector<double>& x) {
  return make_model(id, n).evaluate(truth, x);
}

FitProblem curve_problem(const std::string& id, int n, const std::vector<double>& x, const std::vector<double>& y) {
  FitProblem p;
  p.model_id = id;
  p.n_spins = n;
  p.x = x;
  p.y = y;
  p.parameters = default_transport_parameters(x, y, 0.9 * b_fap);
  p.parameters[0].value = 1.2;
  p.parameters[3].value = 4e-6;
  return p;
}

}  // namespace

TEST_CASE("noise-free round trip for every curve model") {
  const std::vector<double> truth{1.3, 0.05, b_fap, 5e-6};
  const auto x = times(120, 2e-6);
  for (const auto& id : model_ids()) {
    if (id == "Gaussian3") continue;
    CAPTURE(id);
    const auto y = generate(id, 11, truth, x);
    const auto r = fit_curve(curve_problem(id, 11, x, y));
    for (std::size_t i = 0; i < truth.size(); ++i)
      CHECK(r.estimates[i].value == doctest::Approx(truth[i]).epsilon(1e-6).scale(1e-6 * std::abs(truth[i])));
    CHECK(r.converged);
    CHECK(r.residual_norm <= r.initial_residual_norm);
  }
}

TEST_CASE("Gaussian3 round trip") {
  const double delta = gaussian3_delta_hz(b_fap);
  const std::vector<double> truth{1.0, -0.35, -0.3, 0.7 * delta, delta, 0.0};
  std::vector<double> f;
  for (int i = -400; i <= 400; ++i) f.push_back(i * 40.0);
  Spectrum s;
  s.freq_hz = f;
  s.amplitude = generate("Gaussian3", 0, truth, f);
  const auto r = fit_lineshape3(s, delta);
  for (std::size_t i = 0; i < truth.size(); ++i)
    CHECK(r.estimates[i].value == doctest::Approx(truth[i]).epsilon(1e-6).scale(1e-6));
  CHECK(outer_amplitude(r) == doctest::Approx(-0.325).epsilon(1e-6));
}

TEST_CASE("noisy A1 fit recovers the coupling") {
  const std::vector<double> truth{1.3, 0.05, b_fap, 5e-6};
  const auto x = times(150, 2e-6);
  const auto y = add_noise(generate("A1", 11, truth, x), 0.01, 20240601);
  const auto r = fit_curve(curve_problem("A1", 11, x, y));
  CHECK(std::abs(r.value("b") - b_fap) / b_fap < 0.02);
  CHECK(r.uncertainties[2] > 0.0);
}

TEST_CASE("accepted iterations never increase the residual") {
  const std::vector<double> truth{1.3, 0.05, b_fap, 5e-6};
  const auto x = times(100, 2e-6);
  const auto y = add_noise(generate("A2", 9, truth, x), 0.02, 7);
  const auto r = fit_curve(curve_problem("A2", 9, x, y));
  REQUIRE_FALSE(r.history.empty());
  CHECK(r.history.front() <= r.initial_residual_norm);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("fit does not depend on the order of the data") {
  const std::vector<double> truth{1.3, 0.05, b_fap, 5e-6};
  const auto x = times(80, 3e-6);
  const auto y = add_noise(generate("A1", 7, truth, x), 0.01, 99);
  const auto a = fit_curve(curve_problem("A1", 7, x, y));
  std::vector<std::size_t> perm(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
  std::vector<double> xs, ys;
  for (auto i : perm) {
    xs.push_back(x[i]);
    ys.push_back(y[i]);
  }
  const auto b = fit_curve(curve_problem("A1", 7, xs, ys));
  for (std::size_t i = 0; i < a.estimates.size(); ++i)
    CHECK(b.estimates[i].value == doctest::Approx(a.estimates[i].value).epsilon(1e-8).scale(1e-8 * std::abs(a.estimates[i].value)));
}

TEST_CASE("estimates stay inside the bounds") {
  const std::vector<double> truth{1.3, 0.05, b_fap, 5e-6};
  const auto x = times(80, 3e-6);
  auto p = curve_problem("A1", 7, x, generate("A1", 7, truth, x));
  p.parameters[2].hi = 0.95 * b_fap;
  const auto r = fit_curve(p);
  for (const auto& e : r.estimates) {
    CHECK(e.value >= e.lo);
    CHECK(e.value <= e.hi);
  }
  CHECK(r.value("b") == doctest::Approx(0.95 * b_fap));
}

TEST_CASE("degenerate and invalid problems") {
  const auto x = times(20, 1e-6);
  auto p = curve_problem("A1", 5, x, std::vector<double>(x.size(), 0.3));
  CHECK_THROWS_AS(fit_curve(p), NumericalError);
  p.y = generate("A1", 5, {1.0, 0.0, b_fap, 0.0}, x);
  for (auto& q : p.parameters) q.fixed = true;
  CHECK_THROWS_AS(fit_curve(p), DomainError);
  auto short_p = curve_problem("A1", 5, {0.0, 1e-6, 2e-6}, {1.0, 0.9, 0.8});
  CHECK_THROWS_AS(fit_curve(short_p), DomainError);
  CHECK_THROWS_AS(make_model("C7", 5), ConfigError);
  CHECK_THROWS_AS(make_model("A1", 0), ConfigError);
}

TEST_CASE("ill-conditioned problems fall back to the simplex") {
  // scale and baseline are indistinguishable on a flat window of an A1 curve
  // with b fixed, so J^T J is singular.
  const auto x = times(30, 1e-6);
  auto p = curve_problem("A1", 5, x, generate("A1", 5, {1.0, 0.0, b_fap, 0.0}, x));
  p.parameters[0] = {"scale", 1.0, -10, 10, false, 1.0};
  p.parameters[1] = {"baseline", 0.0, -10, 10, false, 1.0};
  p.parameters[2].fixed = true;
  p.parameters[2].value = 0.0;
  p.parameters[3].fixed = true;
  p.y[0] += 0.01;
  const auto r = fit_curve(p);
  CHECK(r.method == "nelder-mead");
  CHECK(r.residual_norm <= r.initial_residual_norm);
}

TEST_CASE("noise is reproducible for a fixed seed") {
  const std::vector<double> y(50, 1.0);
  CHECK(add_noise(y, 0.01, 5) == add_noise(y, 0.01, 5));
  CHECK(add_noise(y, 0.01, 5) != add_noise(y, 0.01, 6));
}

TEST_CASE("fit results serialise with a schema version") {
  const auto x = times(40, 2e-6);
  const auto r = fit_curve(curve_problem("A1", 5, x, generate("A1", 5, {1.0, 0.0, b_fap, 0.0}, x)));
  const auto j = to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["parameters"].size() == 4);
  CHECK(j["parameters"][2]["name"] == "b");
}
