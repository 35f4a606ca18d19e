#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <optional>
#include <string>

namespace spinchain {

/// Secular dipolar coupling (rad/s) between two spins at distance `r` (m)
/// whose connecting vector makes angle `theta` (rad) with the static field.
/// Throws DomainError for r <= 0.
double coupling_from_geometry(double r, double theta, double gamma);

/// Geometry of an evenly spaced linear chain.
struct ChainGeometry {
  double spacing_m = 0.0;
  double theta_rad = 0.0;
  double gamma = 0.0;
  /// Keep only nearest-neighbour couplings.
  bool nn_only = false;
};

enum class CouplingModel { NearestNeighbor, Geometric };

/// Number of spins plus the symmetric coupling table b_{jl} (rad/s).
/// Spins are indexed 0..n-1 in code; spin 0 is the most significant bit of
/// the computational basis index.
class ChainSpec {
 public:
  /// Uniform nearest-neighbour chain with coupling `b`.
  static ChainSpec nearest_neighbor(int n_spins, double b);
  /// Full 1/r^3 table for an evenly spaced chain (optionally truncated to NN).
  static ChainSpec geometric(int n_spins, const ChainGeometry& geometry);

  int n_spins() const noexcept { return n_spins_; }
  CouplingModel model() const noexcept { return model_; }
  const std::optional<ChainGeometry>& geometry() const noexcept { return geometry_; }
  const Eigen::MatrixXd& couplings() const noexcept { return couplings_; }
  double coupling(int j, int l) const { return couplings_(j, l); }

  /// Coupling between spins 0 and 1 (0 for a single spin).
  double nn_coupling() const;
  /// True when b_{j,j+1} is the same for all j and all longer-range entries vanish.
  bool is_nearest_neighbor_uniform(double rel_tol = 1e-12) const;

  /// Same spin count, all couplings beyond |j-l| = 1 zeroed.
  ChainSpec truncated_to_nearest_neighbor() const;

  std::size_t dimension() const { return std::size_t{1} << n_spins_; }

 private:
  ChainSpec(int n, CouplingModel model, Eigen::MatrixXd couplings, std::optional<ChainGeometry> g);

  int n_spins_ = 0;
  CouplingModel model_ = CouplingModel::NearestNeighbor;
  Eigen::MatrixXd couplings_;
  std::optional<ChainGeometry> geometry_;
};

/// JSON layout: {"n_spins": N, "model": "nn", "b_rad_per_s": b}
/// or {"n_spins": N, "model": "geometric", "geometry": {"d_nm", "gamma", "theta_deg", "nn_only"}}.
nlohmann::json to_json(const ChainSpec& spec);
/// Throws ConfigError on missing or invalid fields.
ChainSpec chain_spec_from_json(const nlohmann::json& j);

}  // namespace spinchain
