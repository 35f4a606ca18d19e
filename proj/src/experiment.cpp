#include "spinchain/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include "spinchain/analytic.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/fitting.hpp"
#include "spinchain/mqc.hpp"
#include "spinchain/propagator.hpp"
#include "spinchain/scan.hpp"
#include "spinchain/transport.hpp"

namespace spinchain {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double time_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return io::parse_time(v.get<std::string>());
  throw ConfigError("'" + key + "' must be a number (seconds) or a string with a unit");
}

std::vector<double> grid_value(const nlohmann::json& v) {
  if (v.is_string()) return io::parse_grid(v.get<std::string>());
  if (v.is_object()) {
    for (const char* k : {"start", "stop", "step"})
      if (!v.contains(k)) throw ConfigError(std::string("grid object needs '") + k + "'");
    const double step = time_value(v["step"], "grid.step");
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    return make_grid(time_value(v["start"], "grid.start"), time_value(v["stop"], "grid.stop"), step);
  }
  if (v.is_array()) {
    std::vector<double> g;
    for (const auto& e : v) g.push_back(time_value(e, "grid"));
    return g;
  }
  throw ConfigError("grid must be \"start:stop:step\", an object or an array");
}

bool is_end(const std::string& s) { return lower(s) == "end"; }

std::vector<double> default_grid(Protocol p) {
  if (p == Protocol::T1Scan) return default_t1_grid();
  return make_grid(0.0, 250e-6, 2.5e-6);
}

// Initial state, prepared by end selection when the config asks for it.
Operator initial_operator(const ExperimentConfig& c, const Propagator* dipolar) {
  const auto name = named_state_from_string(c.init);
  if (name == NamedState::EndPolarized && c.t1) return run_end_selection(*dipolar, *c.t1, c.cycle);
  return initial_state(name, c.chain).matrix();
}

Operator readout_operator(const ExperimentConfig& c, const Propagator* dipolar) {
  const int n = c.chain.n_spins();
  if (!is_end(c.readout)) return observable_matrix(Observable::collective_z(), n);
  if (c.readout_t1)
    return end_selection_adjoint(*dipolar, *c.readout_t1, observable_matrix(Observable::collective_z(), n), c.cycle);
  return observable_matrix(Observable::end_spins(), n);
}

bool needs_dipolar(const ExperimentConfig& c) {
  return (is_end(c.init) && c.t1) || (is_end(c.readout) && c.readout_t1) || c.protocol == Protocol::Fid;
}

// Analytic counterpart exists only for ideal states on a uniform NN chain.
bool has_analytic(const ExperimentConfig& c) {
  if (!c.chain.is_nearest_neighbor_uniform() || c.t1 || c.readout_t1) return false;
  try {
    analytic::transport_case(c.init, c.readout);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

analytic::MqcFormula mqc_formula(analytic::TransportCase tc) {
  switch (tc) {
    case analytic::TransportCase::ThermalCollective: return analytic::MqcFormula::B1;
    case analytic::TransportCase::EndCollective:
    case analytic::TransportCase::ThermalEnd: return analytic::MqcFormula::B2;
    case analytic::TransportCase::EndEnd: return analytic::MqcFormula::B3;
    case analytic::TransportCase::LogicalYCollective: return analytic::MqcFormula::B4;
  }
  return analytic::MqcFormula::B1;
}

std::vector<double> noisy(const ExperimentConfig& c, const std::vector<double>& v, std::uint64_t salt) {
  if (c.noise <= 0.0) return v;
  return add_noise(v, c.noise, c.seed + salt);
}

ExperimentOutput run_transport(const ExperimentConfig& c) {
  const int n = c.chain.n_spins();
  ExperimentOutput out;
  SignalTrace trace;
  const bool analytic_ok = has_analytic(c);
  if (c.engine == Engine::Dense) {
    std::optional<Propagator> dip;
    if (needs_dipolar(c)) dip.emplace(build_hamiltonian(c.chain, HamiltonianKind::Dipolar));
    const Propagator dq(build_hamiltonian(c.chain, HamiltonianKind::DoubleQuantum));
    trace = dense_transport(initial_operator(c, dip ? &*dip : nullptr), readout_operator(c, dip ? &*dip : nullptr), dq,
                            c.grid);
  } else {
    const auto tc = analytic::transport_case(c.init, c.readout);
    const double b = c.chain.nn_coupling();
    trace = c.engine == Engine::Analytic ? analytic::transport_curve(analytic::formula_for(tc), n, b, c.grid)
                                         : analytic::freefermion_transport(n, b, c.grid, tc);
  }
  io::Table t;
  t.columns = {"t_s", "signal"};
  t.data = {trace.times, noisy(c, trace.values, 0)};
  out.summary["source"] = trace.meta.value("source", to_string(c.engine));
  if (analytic_ok) {
    const auto tc = analytic::transport_case(c.init, c.readout);
    const auto f = analytic::formula_for(tc);
    out.summary["formula"] = analytic::to_string(f);
    if (c.engine == Engine::Dense) {
      const auto ref = analytic::transport_curve(f, n, c.chain.nn_coupling(), c.grid);
      double dev = 0.0;
      for (std::size_t i = 0; i < ref.values.size(); ++i) dev = std::max(dev, std::abs(ref.values[i] - trace.values[i]));
      t.columns.push_back("analytic");
      t.data.push_back(ref.values);
      out.summary["max_abs_deviation"] = dev;
    }
  }
  out.summary["initial_value"] = trace.values.empty() ? 0.0 : trace.values.front();
  out.tables.emplace_back("transport", std::move(t));
  return out;
}

ExperimentOutput run_mqc(const ExperimentConfig& c) {
  const int n = c.chain.n_spins();
  const int k = c.max_order > 0 ? c.max_order : n + 1;
  ExperimentOutput out;
  const bool analytic_ok = has_analytic(c);
  io::Table t;
  t.columns = {"t_s"};
  t.data = {c.grid};
  if (c.engine == Engine::Dense) {
    std::optional<Propagator> dip;
    if (needs_dipolar(c)) dip.emplace(build_hamiltonian(c.chain, HamiltonianKind::Dipolar));
    const Propagator dq(build_hamiltonian(c.chain, HamiltonianKind::DoubleQuantum));
    const auto s = run_mqc_protocol(initial_operator(c, dip ? &*dip : nullptr),
                                    readout_operator(c, dip ? &*dip : nullptr), dq, c.grid, k);
    double odd = 0.0, four = 0.0;
    for (int m = -k; m <= k; ++m) {
      const auto col = s.order(m);
      for (double v : col) {
        if (m % 2 != 0) odd = std::max(odd, std::abs(v));
        if (std::abs(m) == 4) four = std::max(four, std::abs(v));
      }
      t.columns.push_back("J" + std::to_string(m));
      t.data.push_back(noisy(c, col, static_cast<std::uint64_t>(m + k)));
    }
    out.summary["max_order"] = k;
    out.summary["odd_order_max"] = odd;
    out.summary["order4_max"] = four;
    out.summary["warnings"] = s.warnings;
    if (c.chain.is_nearest_neighbor_uniform() && odd > 1e-8)
      throw NumericalError("odd coherence orders do not vanish on a nearest-neighbour chain (max " +
                           io::format_number(odd) + ")");
    if (analytic_ok) {
      const auto f = mqc_formula(analytic::transport_case(c.init, c.readout));
      std::vector<double> j0, j2;
      double dev = 0.0;
      for (std::size_t i = 0; i < c.grid.size(); ++i) {
        const auto v = analytic::mqc_value(f, n, c.chain.nn_coupling(), c.grid[i]);
        j0.push_back(v.j0);
        j2.push_back(v.j2);
        dev = std::max({dev, std::abs(v.j0 - s.at(i, 0)), std::abs(v.j2 - s.at(i, 2))});
      }
      t.columns.insert(t.columns.end(), {"J0_analytic", "J2_analytic"});
      t.data.push_back(j0);
      t.data.push_back(j2);
      out.summary["formula"] = analytic::to_string(f);
      out.summary["max_abs_deviation"] = dev;
    }
  } else {
    if (!analytic_ok) throw ConfigError("no closed form for this init/readout pair; use engine dense");
    const auto f = mqc_formula(analytic::transport_case(c.init, c.readout));
    std::vector<double> j0, j2;
    for (double tt : c.grid) {
      const auto v = analytic::mqc_value(f, n, c.chain.nn_coupling(), tt);
      j0.push_back(v.j0);
      j2.push_back(v.j2);
    }
    t.columns.insert(t.columns.end(), {"J0", "J2"});
    t.data.push_back(noisy(c, j0, 0));
    t.data.push_back(noisy(c, j2, 1));
    out.summary["formula"] = analytic::to_string(f);
  }
  out.tables.emplace_back("mqc", std::move(t));
  return out;
}

ExperimentOutput run_fid(const ExperimentConfig& c) {
  const int n = c.chain.n_spins();
  const Propagator dip(build_hamiltonian(c.chain, HamiltonianKind::Dipolar));
  const Operator rho0 = initial_operator(c, &dip);
  std::vector<double> taus(c.fid_points);
  for (std::size_t i = 0; i < taus.size(); ++i) taus[i] = static_cast<double>(i) * c.fid_step;
  FidOptions fo;
  fo.end_readout = is_end(c.readout);
  fo.readout_t1 = c.readout_t1.value_or(fo.readout_t1);
  fo.cycle = c.cycle;
  // Every FID is referenced to the thermal signal read out the same way.
  const Operator thermal = DeviationOperator::named(NamedState::Thermal, n).matrix();
  FidOptions ref_opt = fo;
  ref_opt.normalization = 1.0;
  fo.normalization = simulate_fid(thermal, dip, {0.0, c.fid_step}, ref_opt).values.front();
  const auto fid = simulate_fid(rho0, dip, taus, fo);
  const auto spec = lineshape(fid, c.lineshape);

  ExperimentOutput out;
  io::Table ft = io::to_table(fid);
  ft.meta.clear();
  out.tables.emplace_back("fid", std::move(ft));
  io::Table st = io::to_table(spec);
  st.meta.clear();
  out.summary["fwhm_hz"] = std::isfinite(fwhm(spec)) ? nlohmann::json(fwhm(spec)) : nlohmann::json();
  std::vector<double> maxima;
  for (auto i : local_maxima(spec)) maxima.push_back(spec.freq_hz[i]);
  out.summary["maxima_hz"] = maxima;
  out.summary["fid_reference"] = *fo.normalization;
  if (c.fit_gaussian3) {
    if (!c.chain.is_nearest_neighbor_uniform()) throw ConfigError("the Gaussian3 fit needs a uniform NN chain");
    const double delta = gaussian3_delta_hz(c.chain.nn_coupling());
    const auto r = fit_lineshape3(spec, delta);
    const auto model = make_model("Gaussian3");
    std::vector<double> p;
    for (const auto& e : r.estimates) p.push_back(e.value);
    auto component = [&](int which) {
      auto q = p;
      for (int i = 0; i < 3; ++i)
        if (i != which) q[static_cast<std::size_t>(i)] = 0.0;
      return model.evaluate(q, spec.freq_hz);
    };
    st.columns.insert(st.columns.end(), {"fit", "fit_center", "fit_plus", "fit_minus"});
    st.data.push_back(model.evaluate(p, spec.freq_hz));
    st.data.push_back(component(0));
    st.data.push_back(component(1));
    st.data.push_back(component(2));
    out.summary["gaussian3"] = to_json(r);
    out.summary["outer_amplitude"] = outer_amplitude(r);
  }
  out.tables.emplace_back("spectrum", std::move(st));
  return out;
}

ExperimentOutput run_t1scan(const ExperimentConfig& c) {
  T1ScanOptions o;
  o.cycle = c.cycle;
  o.fid_step = c.fid_step;
  o.fid_points = c.fid_points;
  o.lineshape = c.lineshape;
  const auto r = t1_scan(c.chain, c.grid, o);
  io::Table t;
  t.columns = {"t1_s", "fidelity", "fwhm_hz", "outer_amplitude"};
  t.data.assign(4, {});
  for (const auto& row : r.rows) {
    t.data[0].push_back(row.t1);
    t.data[1].push_back(row.fidelity);
    t.data[2].push_back(row.fwhm_hz);
    t.data[3].push_back(row.outer_amplitude);
  }
  ExperimentOutput out;
  out.tables.emplace_back("t1scan", std::move(t));
  io::Table th = io::to_table(r.thermal_spectrum);
  th.meta.clear();
  out.tables.emplace_back("thermal_spectrum", std::move(th));
  out.summary = to_json(r);
  return out;
}

ExperimentOutput run_eightpulse(const ExperimentConfig& c) {
  io::Table t;
  t.columns = {"delay_s", "loops", "total_time_s", "distance"};
  t.data.assign(4, {});
  double delay = c.delay;
  int loops = c.loops;
  bool monotone = true;
  for (int h = 0; h <= c.halvings; ++h) {
    const double d = run_eight_pulse_check(c.chain, delay, loops);
    if (!t.data[3].empty() && !(d < t.data[3].back())) monotone = false;
    t.data[0].push_back(delay);
    t.data[1].push_back(loops);
    t.data[2].push_back(12.0 * delay * loops);
    t.data[3].push_back(d);
    delay /= 2.0;
    loops *= 2;
  }
  ExperimentOutput out;
  out.summary["monotone_decrease"] = monotone;
  out.tables.emplace_back("eightpulse", std::move(t));
  return out;
}

}  // namespace

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::Transport: return "transport";
    case Protocol::Mqc: return "mqc";
    case Protocol::Fid: return "fid";
    case Protocol::T1Scan: return "t1scan";
    case Protocol::EightPulse: return "eightpulse";
  }
  return "transport";
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Dense: return "dense";
    case Engine::Analytic: return "analytic";
    case Engine::FreeFermion: return "freefermion";
  }
  return "dense";
}

Protocol protocol_from_string(const std::string& s) {
  const auto l = lower(s);
  if (l == "transport") return Protocol::Transport;
  if (l == "mqc") return Protocol::Mqc;
  if (l == "fid") return Protocol::Fid;
  if (l == "t1scan") return Protocol::T1Scan;
  if (l == "eightpulse" || l == "eightpulse-check") return Protocol::EightPulse;
  throw ConfigError("unknown protocol '" + s + "' (expected transport, mqc, fid, t1scan or eightpulse)");
}

Engine engine_from_string(const std::string& s) {
  const auto l = lower(s);
  if (l == "dense") return Engine::Dense;
  if (l == "analytic") return Engine::Analytic;
  if (l == "freefermion") return Engine::FreeFermion;
  throw ConfigError("unknown engine '" + s + "' (expected dense, analytic or freefermion)");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "schema_version", "chain",     "init",       "readout",       "protocol", "engine", "grid",
      "t1",             "readout_t1", "cycle",     "max_order",     "fid",      "eightpulse", "noise",
      "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown config key '" + it.key() + "'");
  ExperimentConfig c;
  try {
    if (j.contains("chain")) c.chain = chain_spec_from_json(j["chain"]);
    if (j.contains("init")) c.init = j["init"].get<std::string>();
    if (j.contains("readout")) c.readout = j["readout"].get<std::string>();
    if (j.contains("protocol")) c.protocol = protocol_from_string(j["protocol"].get<std::string>());
    if (j.contains("engine")) c.engine = engine_from_string(j["engine"].get<std::string>());
    if (j.contains("grid")) c.grid = grid_value(j["grid"]);
    if (j.contains("t1") && !j["t1"].is_null()) c.t1 = time_value(j["t1"], "t1");
    if (j.contains("readout_t1") && !j["readout_t1"].is_null()) c.readout_t1 = time_value(j["readout_t1"], "readout_t1");
    if (j.contains("cycle")) {
      const auto s = lower(j["cycle"].get<std::string>());
      if (s == "twostep") c.cycle = EndSelectionCycle::TwoStep;
      else if (s == "zeroquantum") c.cycle = EndSelectionCycle::ZeroQuantum;
      else throw ConfigError("cycle must be TwoStep or ZeroQuantum");
    }
    if (j.contains("max_order")) c.max_order = j["max_order"].get<int>();
    if (j.contains("fid")) {
      const auto& f = j["fid"];
      if (f.contains("step")) c.fid_step = time_value(f["step"], "fid.step");
      if (f.contains("points")) c.fid_points = f["points"].get<std::size_t>();
      if (f.contains("apodization")) {
        const auto a = lower(f["apodization"].get<std::string>());
        if (a == "none") c.lineshape.apodization = Apodization::None;
        else if (a == "exponential") c.lineshape.apodization = Apodization::Exponential;
        else if (a == "gaussian") c.lineshape.apodization = Apodization::Gaussian;
        else throw ConfigError("fid.apodization must be none, exponential or gaussian");
      }
      if (f.contains("apodization_time")) c.lineshape.parameter = time_value(f["apodization_time"], "fid.apodization_time");
      if (f.contains("apodization_rate")) c.lineshape.parameter = f["apodization_rate"].get<double>();
      if (f.contains("zero_fill")) c.lineshape.zero_fill = f["zero_fill"].get<std::size_t>();
      if (f.contains("halve_first_point")) c.lineshape.halve_first_point = f["halve_first_point"].get<bool>();
      if (f.contains("fit_gaussian3")) c.fit_gaussian3 = f["fit_gaussian3"].get<bool>();
    }
    if (j.contains("eightpulse")) {
      const auto& e = j["eightpulse"];
      if (e.contains("delay")) c.delay = time_value(e["delay"], "eightpulse.delay");
      if (e.contains("loops")) c.loops = e["loops"].get<int>();
      if (e.contains("halvings")) c.halvings = e["halvings"].get<int>();
    }
    if (j.contains("noise")) c.noise = j["noise"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.grid.empty()) c.grid = default_grid(c.protocol);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  const char* apod[] = {"none", "exponential", "gaussian"};
  nlohmann::json fid{{"step", c.fid_step},
                     {"points", c.fid_points},
                     {"apodization", apod[static_cast<int>(c.lineshape.apodization)]},
                     {"zero_fill", c.lineshape.zero_fill},
                     {"halve_first_point", c.lineshape.halve_first_point},
                     {"fit_gaussian3", c.fit_gaussian3}};
  if (c.lineshape.apodization == Apodization::Gaussian) fid["apodization_time"] = c.lineshape.parameter;
  if (c.lineshape.apodization == Apodization::Exponential) fid["apodization_rate"] = c.lineshape.parameter;
  return {{"schema_version", 1},
          {"chain", to_json(c.chain)},
          {"init", c.init},
          {"readout", c.readout},
          {"protocol", to_string(c.protocol)},
          {"engine", to_string(c.engine)},
          {"grid", c.grid},
          {"t1", opt(c.t1)},
          {"readout_t1", opt(c.readout_t1)},
          {"cycle", c.cycle == EndSelectionCycle::TwoStep ? "TwoStep" : "ZeroQuantum"},
          {"max_order", c.max_order},
          {"fid", fid},
          {"eightpulse", {{"delay", c.delay}, {"loops", c.loops}, {"halvings", c.halvings}}},
          {"noise", c.noise},
          {"seed", c.seed}};
}

void validate(const ExperimentConfig& c) {
  const int n = c.chain.n_spins();
  const auto name = named_state_from_string(c.init);
  if (lower(c.readout) != "collective" && lower(c.readout) != "end")
    throw ConfigError("readout must be 'collective' or 'end', got '" + c.readout + "'");
  if (name == NamedState::EndPolarized && n < 2) throw ConfigError("init 'end' needs at least 2 spins");
  if ((name == NamedState::LogicalXL || name == NamedState::LogicalYL || name == NamedState::LogicalZL) && n < 4)
    throw ConfigError("logical states need at least 4 spins");
  const bool uses_grid = c.protocol != Protocol::Fid && c.protocol != Protocol::EightPulse;
  if (uses_grid && c.grid.empty()) throw ConfigError("empty time grid");
  for (double t : c.grid)
    if (!std::isfinite(t)) throw ConfigError("time grid contains a non-finite value");
  if (c.t1 && !(*c.t1 >= 0.0)) throw ConfigError("t1 must be non-negative");
  if (c.t1 && name != NamedState::EndPolarized) throw ConfigError("t1 applies only to init 'end'");
  if (c.readout_t1 && !(*c.readout_t1 >= 0.0)) throw ConfigError("readout_t1 must be non-negative");
  if (c.noise < 0.0) throw ConfigError("noise must be non-negative");
  if (c.engine == Engine::Dense) {
    if (n > default_evolution_limit)
      throw ConfigError("engine dense supports at most " + std::to_string(default_evolution_limit) +
                        " spins for time evolution; use engine freefermion for N = " + std::to_string(n));
  } else {
    if (!c.chain.is_nearest_neighbor_uniform())
      throw ConfigError(std::string("engine ") + to_string(c.engine) + " needs a uniform nearest-neighbour chain");
    if (c.protocol != Protocol::Transport && c.protocol != Protocol::Mqc)
      throw ConfigError(std::string("protocol ") + to_string(c.protocol) + " needs engine dense");
    if (c.t1 || c.readout_t1) throw ConfigError("end-selection sequences need engine dense");
    if (c.engine == Engine::FreeFermion && c.protocol != Protocol::Transport)
      throw ConfigError("engine freefermion supports only the transport protocol");
    try {
      analytic::transport_case(c.init, c.readout);
    } catch (const ConfigError&) {
      throw ConfigError("no closed form for init '" + c.init + "' with readout '" + c.readout + "'; use engine dense");
    }
  }
  if (c.protocol == Protocol::Mqc && c.max_order < 0) throw ConfigError("max_order must be non-negative");
  if (c.protocol == Protocol::Fid || c.protocol == Protocol::T1Scan) {
    if (!(c.fid_step > 0.0) || c.fid_points < 2) throw ConfigError("fid needs step > 0 and at least 2 points");
    if (c.lineshape.apodization != Apodization::None && !(c.lineshape.parameter > 0.0))
      throw ConfigError("apodization needs a positive time or rate");
  }
  if (c.protocol == Protocol::T1Scan) {
    if (!c.chain.is_nearest_neighbor_uniform()) throw ConfigError("t1scan needs a uniform nearest-neighbour chain");
    for (double t : c.grid)
      if (t < 0.0) throw ConfigError("t1 grid values must be non-negative");
  }
  if (c.protocol == Protocol::EightPulse) {
    if (!(c.delay > 0.0) || c.loops < 1 || c.halvings < 0) throw ConfigError("eightpulse needs delay > 0, loops >= 1");
  }
}

ExperimentOutput run_experiment(const ExperimentConfig& c) {
  validate(c);
  ExperimentOutput out;
  switch (c.protocol) {
    case Protocol::Transport: out = run_transport(c); break;
    case Protocol::Mqc: out = run_mqc(c); break;
    case Protocol::Fid: out = run_fid(c); break;
    case Protocol::T1Scan: out = run_t1scan(c); break;
    case Protocol::EightPulse: out = run_eightpulse(c); break;
  }
  out.summary["protocol"] = to_string(c.protocol);
  out.summary["engine"] = to_string(c.engine);
  out.summary["n_spins"] = c.chain.n_spins();
  return out;
}

void write_output(const ExperimentOutput& out, const ExperimentConfig& c, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, table] : out.tables) {
    io::Table t = table;
    t.meta.insert(t.meta.begin(), std::string("protocol=") + to_string(c.protocol) + " engine=" + to_string(c.engine) +
                                      " n_spins=" + std::to_string(c.chain.n_spins()) + " init=" + c.init +
                                      " readout=" + c.readout + " seed=" + std::to_string(c.seed));
    io::write_csv(dir / (name + ".csv"), t);
  }
  io::write_json(dir / "summary.json", out.summary);
  io::write_json(dir / "config.json", to_json(c));
}

std::vector<std::string> figure_ids() {
  return {"fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c",
          "fig2d", "fig3",  "fig4a", "fig4b", "fig4c", "fig5"};
}

ExperimentConfig figure_config(const std::string& id) {
  const auto ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    std::string list;
    for (const auto& i : ids) list += (list.empty() ? "" : ", ") + i;
    throw ConfigError("unknown figure id '" + id + "'; valid ids: " + list);
  }
  const double b = -constants::fap_coupling;
  ExperimentConfig c;
  c.chain = ChainSpec::nearest_neighbor(11, b);
  const char* inits[] = {"thermal", "end", "thermal", "end"};
  const char* readouts[] = {"collective", "collective", "end", "end"};
  if (id.rfind("fig1", 0) == 0 || id.rfind("fig2", 0) == 0) {
    const int k = id[4] - 'a';
    c.protocol = id[3] == '1' ? Protocol::Transport : Protocol::Mqc;
    c.init = inits[k];
    c.readout = readouts[k];
    c.grid = make_grid(0.0, 250e-6, 2.5e-6);
  } else if (id == "fig3") {
    c.chain = ChainSpec::nearest_neighbor(8, b);
    c.init = "yL";
    c.grid = make_grid(0.0, 250e-6, 2.5e-6);
  } else if (id == "fig4a" || id == "fig4b") {
    c.protocol = Protocol::Fid;
    c.init = "end";
    c.t1 = id == "fig4a" ? 10e-6 : 60e-6;
    c.fit_gaussian3 = true;
  } else if (id == "fig4c") {
    c.protocol = Protocol::T1Scan;
    c.grid = default_t1_grid();
  } else {
    c.protocol = Protocol::Fid;
    c.readout = "end";
    c.readout_t1 = 30.3e-6;
  }
  return c;
}

nlohmann::json conventions() {
  return {
      {"basis", "spin 1 is the most significant bit; bit 0 is spin up (sigma_z = +1)"},
      {"hamiltonians", "H_dip = sum b_jl [Z Z - (X X + Y Y)/2], H_DQ = sum b_jl (X X - Y Y)/2 with Pauli matrices"},
      {"propagator", "U(t) = exp(-i H t), rho(t) = U rho U^dagger"},
      {"coupling_sign", "b from geometry is negative at theta = 0; figure recipes use b = -8.17e3 rad/s"},
      {"transport_normalisation", "Tr[rho0 O] when nonzero, else Tr[rho0^2]"},
      {"A3", "Re[A_11^2 + A_1N^2]; equals the dense end-end signal for every N"},
      {"A4", "Im[A_12(2t) + A_{N-1,N}(2t)] with Tr[rho0^2] normalisation; A4(0) = 0 and A4 is odd in b"},
      {"B3", "J0 = 4/(N+1)^2 sum_{k,h} sin^2 psi_k sin^2 psi_h cos^2[2bt(cos psi_k + cos psi_h)] (1 + (-1)^{k+h}); "
             "J2 the same with 2/(N+1)^2 and sin^2"},
      {"B4", "J0 = 2/(N+1) sum sin psi sin 2psi sin(8bt cos psi), J2 = -J0/2, Tr[rho0^2] normalisation, signed"},
      {"mqc_transform", "J_n = (1/2K) sum_k S(phi_k) exp(+i n phi_k), phi_k = k pi / K, k = 0..2K-1"},
      {"end_selection", "pi/2 about alpha, dipolar evolution t1, pi/2 about -alpha, alpha cycled over x and y"},
      {"fid", "pi/2 read pulse about y, signal Tr[rho(tau) (sum X + i sum Y)] over the thermal reference"},
      {"lineshape", "Gaussian apodization exp(-(tau/T)^2), zero-filled FFT, real part, first point halved"},
      {"gaussian3", "shared width, outer lines at +-4|b|/2pi, fitted on |f| < 2.5 delta"},
      {"time_units", "seconds in files; configs accept s, ms, us, ns suffixes"},
  };
}

nlohmann::json run_figure(const std::string& id, const std::filesystem::path& dir) {
  const auto c = figure_config(id);
  const auto out = run_experiment(c);
  write_output(out, c, dir);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, table] : out.tables) files.push_back(name + ".csv");
  files.push_back("summary.json");
  files.push_back("config.json");
  nlohmann::json manifest{{"figure", id}, {"config", to_json(c)}, {"conventions", conventions()}, {"files", files},
                          {"summary", out.summary}};
  io::write_json(dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace spinchain
