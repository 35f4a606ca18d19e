#include "spinchain/fid.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/kernels.hpp"

namespace spinchain {

namespace {

std::mutex fftw_planner_mutex;

Operator read_pulse(const Operator& rho, int n) {
  Operator x = rho;
  kernels::rotate_collective(x, n, rotation_matrix_2x2(RotationAxis::y(), constants::pi / 2));
  return x;
}

}  // namespace

double fid_reference(const Operator& rho0, int n) {
  return trace_product(read_pulse(rho0, n), observable_matrix(Observable::collective_transverse(), n)).real();
}

SignalTrace simulate_fid(const Operator& rho0, const Propagator& dipolar, const std::vector<double>& taus,
                         const FidOptions& options) {
  uniform_step(taus);
  if (taus.front() < 0.0) throw DomainError("FID delays must be non-negative");
  if (dipolar.kind() != HamiltonianKind::Dipolar) throw DomainError("FID needs the dipolar propagator");
  const int n = dipolar.n_spins();
  const Operator rho = read_pulse(rho0, n);
  Operator obs;
  if (options.end_readout) {
    const Operator z = observable_matrix(Observable::collective_z(), n);
    obs = read_pulse(end_selection_adjoint(dipolar, options.readout_t1, z, options.cycle), n);
  } else {
    obs = observable_matrix(Observable::collective_transverse(), n);
  }
  const auto raw = dipolar.expectation_sweep(rho, obs, taus);
  double ref = 0.0;
  if (options.normalization) {
    ref = *options.normalization;
  } else {
    ref = taus.front() == 0.0 ? raw.front().real() : trace_product(rho, obs).real();
  }
  if (ref == 0.0 || !std::isfinite(ref)) throw NumericalError("FID normalisation S(0) vanishes");
  SignalTrace tr;
  tr.times = taus;
  for (const auto& v : raw) tr.values.push_back(v.real() / ref);
  if (!options.end_readout)
    for (const auto& v : raw) tr.imag.push_back(v.imag() / ref);
  tr.meta = {{"hamiltonian", "dipolar"},
             {"readout", options.end_readout ? "end_sequence" : "collective_transverse"},
             {"normalization", ref}};
  if (options.end_readout) tr.meta["readout_t1_s"] = options.readout_t1;
  return tr;
}

Spectrum lineshape(const SignalTrace& fid, const LineshapeOptions& options) {
  if (fid.size() == 0) throw DomainError("lineshape of an empty trace");
  const double dt = fid.size() > 1 ? uniform_step(fid.times) : 1.0;
  std::size_t m = 1;
  while (m < std::max(options.zero_fill, fid.size())) m <<= 1;
  fftw_complex* in = fftw_alloc_complex(m);
  fftw_complex* out = fftw_alloc_complex(m);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < m; ++k) {
    in[k][0] = 0.0;
    in[k][1] = 0.0;
  }
  for (std::size_t k = 0; k < fid.size(); ++k) {
    const double tau = fid.times[k] - fid.times.front();
    double w = 1.0;
    if (options.apodization == Apodization::Exponential) w = std::exp(-options.parameter * tau);
    if (options.apodization == Apodization::Gaussian) {
      if (!(options.parameter > 0.0)) throw DomainError("Gaussian apodization needs a positive 1/e time");
      w = std::exp(-(tau / options.parameter) * (tau / options.parameter));
    }
    if (k == 0 && options.halve_first_point) w *= 0.5;
    in[k][0] = w * fid.values[k];
    in[k][1] = fid.is_complex() ? w * fid.imag[k] : 0.0;
  }
  fftw_execute(plan);
  Spectrum s;
  s.freq_hz.resize(m);
  s.amplitude.resize(m);
  const auto half = static_cast<std::ptrdiff_t>(m / 2);
  for (std::size_t i = 0; i < m; ++i) {
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - half;
    const std::size_t src = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(m)) % static_cast<std::ptrdiff_t>(m));
    s.freq_hz[i] = static_cast<double>(k) / (static_cast<double>(m) * dt);
    s.amplitude[i] = out[src][0];
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  s.meta = fid.meta;
  s.meta["points"] = m;
  return s;
}

double fwhm(const Spectrum& s) {
  const auto& a = s.amplitude;
  if (a.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  std::size_t peak = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > a[peak]) peak = i;
  const double h = a[peak] / 2;
  if (!(h > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  std::size_t l = peak, r = peak;
  while (l > 0 && a[l] > h) --l;
  while (r + 1 < a.size() && a[r] > h) ++r;
  if (a[l] > h || a[r] > h) return std::numeric_limits<double>::quiet_NaN();
  const auto cross = [&](std::size_t lo, std::size_t hi) {
    return s.freq_hz[lo] + (h - a[lo]) / (a[hi] - a[lo]) * (s.freq_hz[hi] - s.freq_hz[lo]);
  };
  return cross(r - 1, r) - cross(l, l + 1);
}

std::vector<std::size_t> local_maxima(const Spectrum& s, double rel_threshold) {
  const auto& a = s.amplitude;
  std::vector<std::size_t> out;
  if (a.size() < 3) return out;
  double top = a[0];
  for (double v : a) top = std::max(top, v);
  for (std::size_t i = 1; i + 1 < a.size(); ++i)
    if (a[i] > a[i - 1] && a[i] >= a[i + 1] && a[i] > rel_threshold * top) out.push_back(i);
  return out;
}

}  // namespace spinchain
