#pragma once

#include <optional>
#include <vector>

#include "spinchain/propagator.hpp"
#include "spinchain/protocols.hpp"
#include "spinchain/trace.hpp"

namespace spinchain {

struct FidOptions {
  /// Read out through the end-selection sequence (the select-and-read
  /// sequence), giving a real signal. Otherwise the complex transverse
  /// magnetization sum sigma_x + i sum sigma_y is recorded.
  bool end_readout = false;
  double readout_t1 = 30.3e-6;
  EndSelectionCycle cycle = EndSelectionCycle::TwoStep;
  /// Divide by this value instead of S(0).
  std::optional<double> normalization;
};

/// pi/2 pulse about y on `rho0`, dipolar evolution over the uniform grid `taus`.
SignalTrace simulate_fid(const Operator& rho0, const Propagator& dipolar, const std::vector<double>& taus,
                         const FidOptions& options = {});

/// Raw S(0) for the same configuration (used as a shared reference).
double fid_reference(const Operator& rho0, int n);

enum class Apodization { None, Exponential, Gaussian };

struct LineshapeOptions {
  Apodization apodization = Apodization::None;
  /// Exponential: decay rate (1/s). Gaussian: 1/e time (s).
  double parameter = 0.0;
  /// Transform length is the next power of two >= max(zero_fill, trace size).
  std::size_t zero_fill = 0;
  /// Halve the tau = 0 sample before transforming.
  bool halve_first_point = false;
};

/// Real part of the discrete Fourier transform of the (complex) trace on a
/// centred Hz axis. Throws DomainError for an empty or non-uniform trace.
Spectrum lineshape(const SignalTrace& fid, const LineshapeOptions& options = {});

/// Full width at half the global maximum, linear interpolation between bins.
/// NaN when the maximum is not positive or the half-height is never crossed.
double fwhm(const Spectrum& s);

/// Local maxima above `rel_threshold` times the global maximum.
std::vector<std::size_t> local_maxima(const Spectrum& s, double rel_threshold = 0.05);

}  // namespace spinchain
