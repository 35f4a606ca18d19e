#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/errors.hpp"
#include "spinchain/experiment.hpp"
#include "spinchain/fitting.hpp"
#include "spinchain/io.hpp"

namespace fs = std::filesystem;
using namespace spinchain;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct RunFlags {
  std::string config;
  std::string engine;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::optional<int> n_spins;
  std::optional<double> b;
  std::string init;
  std::string readout;
  std::string t1;
  std::string readout_t1;
  std::optional<double> noise;
  std::optional<int> max_order;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Experiment config (JSON)");
  cmd->add_option("--engine", f.engine, "dense, analytic or freefermion");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--seed", f.seed, "Seed for added noise");
  cmd->add_option("--grid", f.grid, "Time grid start:stop:step, units s/ms/us/ns");
  cmd->add_option("--n", f.n_spins, "Number of spins (nearest-neighbour chain)");
  cmd->add_option("--b", f.b, "Nearest-neighbour coupling, rad/s");
  cmd->add_option("--init", f.init, "thermal, end, xL, yL or zL");
  cmd->add_option("--readout", f.readout, "collective or end");
  cmd->add_option("--t1", f.t1, "End-selection time for init 'end' (e.g. 30us)");
  cmd->add_option("--readout-t1", f.readout_t1, "End-selection time of the end readout");
  cmd->add_option("--noise", f.noise, "Relative Gaussian noise added to the output signal");
  cmd->add_option("--max-order", f.max_order, "MQC phase count K");
}

ExperimentConfig build_config(const RunFlags& f, const std::optional<Protocol>& protocol) {
  nlohmann::json j = f.config.empty() ? nlohmann::json::object() : io::read_json(f.config);
  if (protocol) j["protocol"] = to_string(*protocol);
  if (!f.engine.empty()) j["engine"] = f.engine;
  if (f.seed) j["seed"] = *f.seed;
  if (!f.grid.empty()) j["grid"] = f.grid;
  if (f.n_spins || f.b) {
    nlohmann::json chain = j.value("chain", nlohmann::json::object());
    if (f.n_spins) chain["n_spins"] = *f.n_spins;
    if (f.b) {
      chain["model"] = "nn";
      chain["b_rad_per_s"] = *f.b;
    }
    if (!chain.contains("model")) chain["model"] = "nn";
    if (chain["model"] == "nn" && !chain.contains("b_rad_per_s")) chain["b_rad_per_s"] = -8.17e3;
    j["chain"] = chain;
  }
  if (!f.init.empty()) j["init"] = f.init;
  if (!f.readout.empty()) j["readout"] = f.readout;
  if (!f.t1.empty()) j["t1"] = f.t1;
  if (!f.readout_t1.empty()) j["readout_t1"] = f.readout_t1;
  if (f.noise) j["noise"] = *f.noise;
  if (f.max_order) j["max_order"] = *f.max_order;
  return config_from_json(j);
}

int run_command(const RunFlags& f, const std::optional<Protocol>& protocol) {
  const auto c = build_config(f, protocol);
  const auto out = run_experiment(c);
  const fs::path dir = f.out.empty() ? fs::path("out") / to_string(c.protocol) : fs::path(f.out);
  write_output(out, c, dir);
  std::cout << out.summary.dump(2) << '\n';
  return 0;
}

struct FitFlags {
  std::string data;
  std::string model;
  int n_spins = 0;
  double b_guess = 8.17e3;
  std::string column;
  std::vector<std::string> fix;
  std::string out;
  std::optional<std::uint64_t> seed;
  double noise = 0.0;
  double delta_hz = 0.0;
};

int fit_command(const FitFlags& f) {
  const auto table = io::read_csv(fs::path(f.data));
  auto trace = io::trace_from_table(table, f.column);
  if (f.noise > 0.0) trace.values = add_noise(trace.values, f.noise, f.seed.value_or(1));
  FitResult r;
  if (f.model == "Gaussian3" || f.model == "gaussian3") {
    Spectrum s;
    s.freq_hz = trace.times;
    s.amplitude = trace.values;
    const double delta = f.delta_hz > 0.0 ? f.delta_hz : gaussian3_delta_hz(f.b_guess);
    r = fit_lineshape3(s, delta);
  } else {
    FitProblem p;
    p.model_id = f.model;
    p.n_spins = f.n_spins;
    p.x = trace.times;
    p.y = trace.values;
    p.parameters = default_transport_parameters(p.x, p.y, f.b_guess);
    for (const auto& spec : f.fix) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw ConfigError("--fix expects name=value, got '" + spec + "'");
      const auto name = spec.substr(0, eq);
      bool found = false;
      for (auto& q : p.parameters)
        if (q.name == name) {
          try {
            q.value = std::stod(spec.substr(eq + 1));
          } catch (const std::exception&) {
            throw ConfigError("cannot parse the value in --fix " + spec);
          }
          q.fixed = true;
          found = true;
        }
      if (!found) throw ConfigError("unknown parameter '" + name + "' in --fix");
    }
    r = fit_curve(p);
  }
  auto j = to_json(r);
  j["data"] = fs::path(f.data).filename().string();
  if (f.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    io::write_json(f.out, j);
  return r.converged ? 0 : exit_numerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain transport, MQC and lineshape simulation"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the experiment described by --config");
  add_run_flags(run, run_flags);

  struct Sub {
    const char* name;
    const char* help;
    Protocol protocol;
  };
  const Sub subs[] = {
      {"transport", "Polarization transport under the DQ Hamiltonian", Protocol::Transport},
      {"mqc", "Multiple-quantum coherence intensities", Protocol::Mqc},
      {"fid", "Free induction decay and lineshape", Protocol::Fid},
      {"t1scan", "End-selection time scan (fidelity, linewidth, outer Gaussian amplitude)", Protocol::T1Scan},
      {"eightpulse", "Eight-pulse cycle versus ideal DQ propagator", Protocol::EightPulse},
  };
  std::vector<RunFlags> sub_flags(std::size(subs));
  std::vector<CLI::App*> sub_cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    sub_cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_run_flags(sub_cmds.back(), sub_flags[i]);
  }

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit a model to a CSV data file");
  fit->add_option("data", fit_flags.data, "CSV file (first column x)")->required();
  fit->add_option("--model", fit_flags.model, "A1..A4, B1.J0 .. B4.J2, Gaussian3")->required();
  fit->add_option("--n-spins", fit_flags.n_spins, "Chain length for transport/MQC models");
  fit->add_option("--b-guess", fit_flags.b_guess, "Initial coupling, rad/s");
  fit->add_option("--column", fit_flags.column, "Data column (default: second)");
  fit->add_option("--fix", fit_flags.fix, "Fix a parameter, name=value");
  fit->add_option("--delta-hz", fit_flags.delta_hz, "Gaussian3 line spacing (default 4|b|/2pi)");
  fit->add_option("--out", fit_flags.out, "Result JSON (default: stdout)");
  fit->add_option("--seed", fit_flags.seed, "Seed for --noise");
  fit->add_option("--noise", fit_flags.noise, "Relative Gaussian noise added before fitting");

  std::vector<std::string> figure_list;
  std::string figure_out = "figures";
  auto* figures = app.add_subcommand("figures", "Regenerate figure data bundles");
  figures->add_option("ids", figure_list, "Figure ids, or 'all'")->required();
  figures->add_option("--out", figure_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (run->parsed()) return run_command(run_flags, std::nullopt);
    for (std::size_t i = 0; i < sub_cmds.size(); ++i)
      if (sub_cmds[i]->parsed()) return run_command(sub_flags[i], subs[i].protocol);
    if (fit->parsed()) return fit_command(fit_flags);
    if (figures->parsed()) {
      auto ids = figure_list;
      if (ids.size() == 1 && ids[0] == "all") ids = figure_ids();
      for (const auto& id : ids) figure_config(id);
      nlohmann::json index = nlohmann::json::array();
      for (const auto& id : ids) {
        const auto m = run_figure(id, fs::path(figure_out) / id);
        index.push_back({{"figure", id}, {"summary", m["summary"]}});
        std::cerr << "wrote " << (fs::path(figure_out) / id).string() << '\n';
      }
      std::cout << index.dump(2) << '\n';
      return 0;
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
  return 0;
}
