#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/chain_spec.hpp"
#include "spinchain/constants.hpp"
#include "spinchain/fid.hpp"
#include "spinchain/io.hpp"
#include "spinchain/protocols.hpp"

namespace spinchain {

enum class Protocol { Transport, Mqc, Fid, T1Scan, EightPulse };
enum class Engine { Dense, Analytic, FreeFermion };

const char* to_string(Protocol p);
const char* to_string(Engine e);
Protocol protocol_from_string(const std::string& s);
Engine engine_from_string(const std::string& s);

struct ExperimentConfig {
  ChainSpec chain = ChainSpec::nearest_neighbor(8, -constants::fap_coupling);
  /// thermal, end, xL, yL, zL.
  std::string init = "thermal";
  /// collective or end.
  std::string readout = "collective";
  Protocol protocol = Protocol::Transport;
  Engine engine = Engine::Dense;
  std::vector<double> grid;
  /// End-selection time for preparing the end state; ideal state when unset.
  std::optional<double> t1;
  /// End-selection time of the end readout sequence; ideal sigma_z^1 + sigma_z^N when unset.
  std::optional<double> readout_t1;
  EndSelectionCycle cycle = EndSelectionCycle::TwoStep;
  /// MQC phase count K (2K phases); 0 picks N + 1.
  int max_order = 0;
  /// FID / lineshape.
  double fid_step = 5e-6;
  std::size_t fid_points = 512;
  LineshapeOptions lineshape{Apodization::Gaussian, 200e-6, 4096, true};
  bool fit_gaussian3 = false;
  /// Eight-pulse check: initial delay, loops and number of halvings.
  double delay = 1e-6;
  int loops = 1;
  int halvings = 3;
  /// Relative Gaussian noise added to written signals (0 = none).
  double noise = 0.0;
  std::uint64_t seed = 1;
};

/// Parses a config object. Times accept unit suffixes ("30us"). Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
/// Engine/size/protocol compatibility. Throws ConfigError.
void validate(const ExperimentConfig& c);

struct ExperimentOutput {
  std::vector<std::pair<std::string, io::Table>> tables;
  nlohmann::json summary = nlohmann::json::object();
};

/// Validates and runs. Throws ConfigError or NumericalError.
ExperimentOutput run_experiment(const ExperimentConfig& c);

/// Writes <name>.csv for each table, summary.json and config.json into `dir`.
void write_output(const ExperimentOutput& out, const ExperimentConfig& c, const std::filesystem::path& dir);

std::vector<std::string> figure_ids();
/// Throws ConfigError listing the valid ids.
ExperimentConfig figure_config(const std::string& id);
/// Runs the figure recipe and writes its bundle plus manifest.json into `dir`.
nlohmann::json run_figure(const std::string& id, const std::filesystem::path& dir);

/// Conventions recorded in every manifest.
nlohmann::json conventions();

}  // namespace spinchain
