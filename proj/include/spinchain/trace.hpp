#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace spinchain {

/// Sampled signal. `imag` is empty for real signals.
struct SignalTrace {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> imag;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t size() const noexcept { return times.size(); }
  bool is_complex() const noexcept { return !imag.empty(); }
};

/// Spectrum on a centred frequency axis (Hz).
struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<double> amplitude;
  nlohmann::json meta = nlohmann::json::object();
};

/// Throws DomainError unless `t` is strictly increasing with constant step
/// (relative tolerance 1e-9). Returns the step.
double uniform_step(const std::vector<double>& t);

/// Evenly spaced grid start, start + step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace spinchain
