#include "spinchain/chain_spec.hpp"

#include <cmath>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

double coupling_from_geometry(double r, double theta, double gamma) {
  if (!(r > 0.0)) throw DomainError("coupling_from_geometry: distance must be positive");
  const double c = std::cos(theta);
  return constants::mu0 / (16.0 * constants::pi) * gamma * gamma * constants::hbar / (r * r * r) *
         (1.0 - 3.0 * c * c);
}

ChainSpec::ChainSpec(int n, CouplingModel model, Eigen::MatrixXd couplings,
                     std::optional<ChainGeometry> g)
    : n_spins_(n), model_(model), couplings_(std::move(couplings)), geometry_(std::move(g)) {}

ChainSpec ChainSpec::nearest_neighbor(int n_spins, double b) {
  if (n_spins < 1) throw DomainError("chain needs at least one spin");
  if (!std::isfinite(b)) throw DomainError("coupling must be finite");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_spins, n_spins);
  for (int j = 0; j + 1 < n_spins; ++j) c(j, j + 1) = c(j + 1, j) = b;
  return ChainSpec(n_spins, CouplingModel::NearestNeighbor, std::move(c), std::nullopt);
}

ChainSpec ChainSpec::geometric(int n_spins, const ChainGeometry& g) {
  if (n_spins < 1) throw DomainError("chain needs at least one spin");
  if (!(g.spacing_m > 0.0)) throw DomainError("chain spacing must be positive");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_spins, n_spins);
  for (int j = 0; j < n_spins; ++j) {
    for (int l = j + 1; l < n_spins; ++l) {
      if (g.nn_only && l - j > 1) continue;
      c(j, l) = c(l, j) = coupling_from_geometry((l - j) * g.spacing_m, g.theta_rad, g.gamma);
    }
  }
  return ChainSpec(n_spins, CouplingModel::Geometric, std::move(c), g);
}

double ChainSpec::nn_coupling() const { return n_spins_ > 1 ? couplings_(0, 1) : 0.0; }

bool ChainSpec::is_nearest_neighbor_uniform(double rel_tol) const {
  const double b = nn_coupling();
  const double scale = std::max(std::abs(b), 1e-300);
  for (int j = 0; j < n_spins_; ++j) {
    for (int l = j + 1; l < n_spins_; ++l) {
      const double expected = (l - j == 1) ? b : 0.0;
      if (std::abs(couplings_(j, l) - expected) > rel_tol * scale) return false;
    }
  }
  return true;
}

ChainSpec ChainSpec::truncated_to_nearest_neighbor() const {
  Eigen::MatrixXd c = couplings_;
  for (int j = 0; j < n_spins_; ++j)
    for (int l = 0; l < n_spins_; ++l)
      if (std::abs(j - l) > 1) c(j, l) = 0.0;
  std::optional<ChainGeometry> g = geometry_;
  if (g) g->nn_only = true;
  return ChainSpec(n_spins_, model_, std::move(c), g);
}

nlohmann::json to_json(const ChainSpec& spec) {
  nlohmann::json j;
  j["n_spins"] = spec.n_spins();
  if (spec.model() == CouplingModel::NearestNeighbor) {
    j["model"] = "nn";
    j["b_rad_per_s"] = spec.nn_coupling();
  } else {
    const auto& g = *spec.geometry();
    j["model"] = "geometric";
    j["geometry"] = {{"d_nm", g.spacing_m * 1e9},
                     {"gamma", g.gamma},
                     {"theta_deg", g.theta_rad * 180.0 / constants::pi},
                     {"nn_only", g.nn_only}};
  }
  return j;
}

namespace {

double require_number(const nlohmann::json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(std::string(where) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

ChainSpec chain_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("chain spec must be a JSON object");
  if (!j.contains("n_spins") || !j.at("n_spins").is_number_integer())
    throw ConfigError("chain spec: 'n_spins' must be an integer");
  const int n = j.at("n_spins").get<int>();
  if (n < 1) throw ConfigError("chain spec: 'n_spins' must be positive");
  const std::string model = j.value("model", std::string("nn"));
  if (model == "nn") {
    return ChainSpec::nearest_neighbor(n, require_number(j, "b_rad_per_s", "chain spec"));
  }
  if (model == "geometric") {
    if (!j.contains("geometry") || !j.at("geometry").is_object())
      throw ConfigError("chain spec: geometric model needs a 'geometry' object");
    const auto& g = j.at("geometry");
    ChainGeometry geo;
    geo.spacing_m = require_number(g, "d_nm", "geometry") * 1e-9;
    geo.gamma = g.contains("gamma") ? require_number(g, "gamma", "geometry") : constants::gamma_19F;
    geo.theta_rad = g.contains("theta_deg") ? require_number(g, "theta_deg", "geometry") * constants::pi / 180.0 : 0.0;
    geo.nn_only = g.value("nn_only", false);
    if (!(geo.spacing_m > 0.0)) throw ConfigError("geometry: 'd_nm' must be positive");
    return ChainSpec::geometric(n, geo);
  }
  throw ConfigError("chain spec: unknown model '" + model + "' (expected \"nn\" or \"geometric\")");
}

}  // namespace spinchain
