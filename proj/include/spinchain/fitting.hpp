#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "spinchain/trace.hpp"

namespace spinchain {

struct Parameter {
  std::string name;
  double value = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool fixed = false;
  /// Magnitude used for finite-difference steps. 0 means max(|value|, 1e-12).
  double typical = 0.0;
};

/// Model value at `x` for the full parameter vector (fixed ones included).
using ModelFunction = std::function<std::vector<double>(const std::vector<double>& params, const std::vector<double>& x)>;

/// Registered model: "A1".."A4", "B1.J0", "B1.J2", ..., "B4.J2", "Gaussian3".
struct Model {
  std::string id;
  std::vector<std::string> parameter_names;
  ModelFunction evaluate;
};

/// Transport and MQC models take (scale, baseline, b, shift) and evaluate
/// scale * S(b, x - shift) + baseline for an `n_spins` chain. Gaussian3 takes
/// (a0, a_plus, a_minus, width_hz, delta_hz, center_hz). Throws ConfigError.
Model make_model(const std::string& id, int n_spins = 0);
std::vector<std::string> model_ids();

struct FitOptions {
  int max_iterations = 200;
  /// Stop when the relative cost decrease and the relative step fall below this.
  double tolerance = 1e-14;
  /// Condition number of J^T J above which the simplex fallback is used.
  double max_condition = 1e14;
};

struct FitProblem {
  std::vector<double> x;
  std::vector<double> y;
  std::string model_id;
  int n_spins = 0;
  std::vector<Parameter> parameters;
  FitOptions options;
};

struct FitResult {
  std::string model_id;
  std::vector<Parameter> estimates;
  /// One-sigma from the linearised covariance; 0 for fixed parameters.
  std::vector<double> uncertainties;
  double residual_norm = 0.0;
  double initial_residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  /// "levenberg-marquardt" or "nelder-mead".
  std::string method;
  /// Residual norm after each accepted iteration.
  std::vector<double> history;

  double value(const std::string& name) const;
};

/// Bounded damped least squares with a central-difference Jacobian. Falls
/// back to Nelder-Mead when J^T J is ill-conditioned. Data are sorted by x
/// first, so the result does not depend on point order.
/// Throws DomainError for invalid problems, NumericalError for constant data.
FitResult fit_curve(const FitProblem& problem);

/// Initial parameters for a transport or MQC model fitted to data generated
/// with coupling near `b_guess`.
std::vector<Parameter> default_transport_parameters(const std::vector<double>& x, const std::vector<double>& y,
                                                    double b_guess);

/// Gaussian3 initial parameters with the outer lines at +-delta_hz.
std::vector<Parameter> default_gaussian3_parameters(double delta_hz, double peak = 1.0);

/// Outer-line spacing of the Gaussian3 model: 4|b| / 2 pi, the local field
/// of a spin whose two neighbours are parallel.
double gaussian3_delta_hz(double b);

struct Lineshape3Options {
  /// Fit window |f - center| < window * delta.
  double window = 2.5;
  bool fit_center = false;
  /// Initial widths in units of delta; the lowest-residual fit is kept.
  std::vector<double> start_widths{0.25, 0.5, 1.0, 1.5};
  FitOptions fit;
};

/// Fit of the Gaussian3 model with delta fixed, started from each of
/// `start_widths`. Requires the spectrum to cover +-3 delta. The outer
/// amplitude is (a_plus + a_minus) / 2.
FitResult fit_lineshape3(const Spectrum& spectrum, double delta_hz, const Lineshape3Options& options = {});
double outer_amplitude(const FitResult& lineshape_fit);

/// Adds N(0, sigma^2) noise with sigma = relative * max|y|, std::mt19937_64.
std::vector<double> add_noise(const std::vector<double>& y, double relative, std::uint64_t seed);

nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const FitProblem& p);

}  // namespace spinchain
