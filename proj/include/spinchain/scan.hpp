#pragma once

#include <json.hpp>
#include <vector>

#include "spinchain/chain_spec.hpp"
#include "spinchain/fid.hpp"
#include "spinchain/fitting.hpp"
#include "spinchain/protocols.hpp"

namespace spinchain {

struct T1ScanOptions {
  EndSelectionCycle cycle = EndSelectionCycle::TwoStep;
  double fid_step = 5e-6;
  std::size_t fid_points = 512;
  LineshapeOptions lineshape{Apodization::Gaussian, 200e-6, 4096, true};
  Lineshape3Options fit;
};

struct T1ScanRow {
  double t1 = 0.0;
  double fidelity = 0.0;
  double fwhm_hz = 0.0;
  double outer_amplitude = 0.0;
  bool fit_converged = false;
};

struct T1ScanResult {
  std::vector<T1ScanRow> rows;
  double delta_hz = 0.0;
  /// Reference thermal lineshape (t1 = 0 without end selection).
  Spectrum thermal_spectrum;
  double thermal_fwhm_hz = 0.0;
  std::size_t argmax_fidelity = 0;
  std::size_t argmin_fwhm = 0;
  /// Interior local maxima of the fidelity column.
  int fidelity_maxima = 0;
  /// First sign change of the outer amplitude, linearly interpolated. NaN if none.
  double zero_crossing_t1 = 0.0;
};

/// Default grid: 0 to 60 us in 2.5 us steps.
std::vector<double> default_t1_grid();

/// For each t1: end selection of the thermal state, fidelity with the end
/// state, FID and lineshape (normalised by the thermal FID and spectrum),
/// FWHM, and the Gaussian3 outer amplitude. Points run in parallel.
T1ScanResult t1_scan(const ChainSpec& spec, const std::vector<double>& grid, const T1ScanOptions& options = {});

nlohmann::json to_json(const T1ScanResult& r);

}  // namespace spinchain
