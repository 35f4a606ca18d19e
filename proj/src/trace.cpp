#include "spinchain/trace.hpp"

#include <cmath>

#include "spinchain/errors.hpp"

namespace spinchain {

double uniform_step(const std::vector<double>& t) {
  if (t.size() < 2) throw DomainError("grid needs at least two points");
  const double step = t[1] - t[0];
  if (!(step > 0.0)) throw DomainError("grid must be strictly increasing");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs((t[k] - t[k - 1]) - step) > 1e-9 * std::max(std::abs(step), std::abs(t[k])))
      throw DomainError("grid is not uniform at index " + std::to_string(k));
  return step;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (stop < start) throw DomainError("grid stop precedes start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = start + static_cast<double>(k) * step;
  return g;
}

}  // namespace spinchain
