#include "spinchain/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "spinchain/errors.hpp"

namespace spinchain {

std::vector<double> default_t1_grid() { return make_grid(0.0, 60e-6, 2.5e-6); }

T1ScanResult t1_scan(const ChainSpec& spec, const std::vector<double>& grid, const T1ScanOptions& options) {
  if (grid.empty()) throw DomainError("empty t1 grid");
  if (!spec.is_nearest_neighbor_uniform())
    throw DomainError("the t1 scan uses the nearest-neighbour line spacing; pass a uniform NN chain");
  const int n = spec.n_spins();
  const Propagator dip(build_hamiltonian(spec, HamiltonianKind::Dipolar));
  const Operator thermal = DeviationOperator::named(NamedState::Thermal, n).matrix();
  std::vector<double> taus(options.fid_points);
  for (std::size_t i = 0; i < taus.size(); ++i) taus[i] = static_cast<double>(i) * options.fid_step;

  FidOptions fo;
  fo.normalization = fid_reference(thermal, n);
  T1ScanResult out;
  out.delta_hz = gaussian3_delta_hz(spec.nn_coupling());
  out.thermal_spectrum = lineshape(simulate_fid(thermal, dip, taus, fo), options.lineshape);
  const double peak = *std::max_element(out.thermal_spectrum.amplitude.begin(), out.thermal_spectrum.amplitude.end());
  if (!(peak > 0.0)) throw NumericalError("thermal spectrum has no positive maximum");
  for (double& v : out.thermal_spectrum.amplitude) v /= peak;
  out.thermal_fwhm_hz = fwhm(out.thermal_spectrum);

  const EndSelector selector(dip, thermal, options.cycle);
  for (double t1 : grid)
    if (!(t1 >= 0.0)) throw DomainError("t1 grid values must be non-negative");
  out.rows.resize(grid.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
    T1ScanRow& row = out.rows[i];
    row.t1 = grid[i];
    const Operator rho = selector.apply(grid[i]);
    row.fidelity = end_state_fidelity(rho, n);
    Spectrum s = lineshape(simulate_fid(rho, dip, taus, fo), options.lineshape);
    for (double& v : s.amplitude) v /= peak;
    row.fwhm_hz = fwhm(s);
    const auto fit = fit_lineshape3(s, out.delta_hz, options.fit);
    row.outer_amplitude = outer_amplitude(fit);
    row.fit_converged = fit.converged;
    } catch (...) {
#pragma omp critical(t1_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].fidelity > out.rows[out.argmax_fidelity].fidelity) out.argmax_fidelity = i;
    if (std::isnan(out.rows[out.argmin_fwhm].fwhm_hz) ||
        (!std::isnan(out.rows[i].fwhm_hz) && out.rows[i].fwhm_hz < out.rows[out.argmin_fwhm].fwhm_hz))
      out.argmin_fwhm = i;
  }
  for (std::size_t i = 1; i + 1 < out.rows.size(); ++i)
    if (out.rows[i].fidelity > out.rows[i - 1].fidelity && out.rows[i].fidelity > out.rows[i + 1].fidelity)
      ++out.fidelity_maxima;
  out.zero_crossing_t1 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const double a = out.rows[i - 1].outer_amplitude, b = out.rows[i].outer_amplitude;
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) {
      out.zero_crossing_t1 = out.rows[i - 1].t1 + a / (a - b) * (out.rows[i].t1 - out.rows[i - 1].t1);
      break;
    }
  }
  return out;
}

nlohmann::json to_json(const T1ScanResult& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  return {{"delta_hz", r.delta_hz},
          {"thermal_fwhm_hz", num(r.thermal_fwhm_hz)},
          {"fidelity_max_t1", r.rows.at(r.argmax_fidelity).t1},
          {"fidelity_max", r.rows.at(r.argmax_fidelity).fidelity},
          {"fidelity_interior_maxima", r.fidelity_maxima},
          {"linewidth_min_t1", r.rows.at(r.argmin_fwhm).t1},
          {"linewidth_min_hz", num(r.rows.at(r.argmin_fwhm).fwhm_hz)},
          {"outer_amplitude_zero_crossing_t1", num(r.zero_crossing_t1)}};
}

}  // namespace spinchain
