#include "spinchain/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spinchain/analytic.hpp"
#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

const std::vector<std::string> curve_names{"scale", "baseline", "b", "shift"};
const std::vector<std::string> gaussian_names{"a0", "a_plus", "a_minus", "width_hz", "delta_hz", "center_hz"};

Model transport_model(const std::string& id, analytic::TransportFormula f, int n) {
  return {id, curve_names, [f, n](const std::vector<double>& p, const std::vector<double>& x) {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
              out[i] = p[0] * analytic::transport_value(f, n, p[2], x[i] - p[3]) + p[1];
            return out;
          }};
}

Model mqc_model(const std::string& id, analytic::MqcFormula f, bool double_quantum, int n) {
  return {id, curve_names, [f, n, double_quantum](const std::vector<double>& p, const std::vector<double>& x) {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
              const auto v = analytic::mqc_value(f, n, p[2], x[i] - p[3]);
              out[i] = p[0] * (double_quantum ? v.j2 : v.j0) + p[1];
            }
            return out;
          }};
}

Model gaussian3_model() {
  return {"Gaussian3", gaussian_names, [](const std::vector<double>& p, const std::vector<double>& x) {
            std::vector<double> out(x.size());
            const double s = 2.0 * p[3] * p[3];
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double f = x[i] - p[5];
              out[i] = p[0] * std::exp(-f * f / s) + p[1] * std::exp(-(f - p[4]) * (f - p[4]) / s) +
                       p[2] * std::exp(-(f + p[4]) * (f + p[4]) / s);
            }
            return out;
          }};
}

// Free-parameter view of a problem with box clamping.
class Objective {
 public:
  Objective(const Model& model, const std::vector<double>& x, const std::vector<double>& y,
            std::vector<Parameter> params)
      : model_(model), x_(x), y_(y), params_(std::move(params)) {
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (!params_[i].fixed) free_.push_back(i);
  }

  std::size_t size() const { return free_.size(); }
  std::size_t points() const { return y_.size(); }

  Eigen::VectorXd initial() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t k = 0; k < free_.size(); ++k) v(static_cast<Eigen::Index>(k)) = params_[free_[k]].value;
    return clamp(v);
  }

  Eigen::VectorXd clamp(Eigen::VectorXd v) const {
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const auto& p = params_[free_[k]];
      v(static_cast<Eigen::Index>(k)) = std::clamp(v(static_cast<Eigen::Index>(k)), p.lo, p.hi);
    }
    return v;
  }

  double typical(std::size_t k, double v) const {
    const auto& p = params_[free_[k]];
    return p.typical > 0.0 ? p.typical : std::max(std::abs(v), 1e-12);
  }
  double lo(std::size_t k) const { return params_[free_[k]].lo; }
  double hi(std::size_t k) const { return params_[free_[k]].hi; }

  std::vector<double> full(const Eigen::VectorXd& v) const {
    std::vector<double> p(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) p[i] = params_[i].value;
    for (std::size_t k = 0; k < free_.size(); ++k) p[free_[k]] = v(static_cast<Eigen::Index>(k));
    return p;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& v) const {
    const auto m = model_.evaluate(full(v), x_);
    Eigen::VectorXd r(static_cast<Eigen::Index>(y_.size()));
    for (std::size_t i = 0; i < y_.size(); ++i) r(static_cast<Eigen::Index>(i)) = m[i] - y_[i];
    return r;
  }

  double cost(const Eigen::VectorXd& v) const {
    const double c = residual(v).squaredNorm();
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& v) const {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(y_.size()), static_cast<Eigen::Index>(free_.size()));
    for (std::size_t k = 0; k < free_.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double h = 1e-6 * typical(k, v(kk));
      Eigen::VectorXd up = v, dn = v;
      up(kk) = std::min(v(kk) + h, hi(k));
      dn(kk) = std::max(v(kk) - h, lo(k));
      j.col(kk) = (residual(up) - residual(dn)) / (up(kk) - dn(kk));
    }
    return j;
  }

  std::vector<Parameter> estimates(const Eigen::VectorXd& v) const {
    auto out = params_;
    const auto p = full(v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].value = p[i];
    return out;
  }

  const std::vector<std::size_t>& free_indices() const { return free_; }

 private:
  const Model& model_;
  const std::vector<double>& x_;
  const std::vector<double>& y_;
  std::vector<Parameter> params_;
  std::vector<std::size_t> free_;
};

struct Minimum {
  Eigen::VectorXd v;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  bool ill_conditioned = false;
  std::vector<double> history;
};

Minimum levenberg_marquardt(const Objective& obj, const FitOptions& opt) {
  Minimum m;
  m.v = obj.initial();
  m.cost = obj.cost(m.v);
  double lambda = 1e-3;
  for (m.iterations = 0; m.iterations < opt.max_iterations; ++m.iterations) {
    const Eigen::MatrixXd j = obj.jacobian(m.v);
    const Eigen::VectorXd r = obj.residual(m.v);
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    Eigen::VectorXd scale = a.diagonal();
    for (Eigen::Index i = 0; i < scale.size(); ++i)
      if (!(scale(i) > 0.0)) scale(i) = 1.0;
    const Eigen::VectorXd inv = scale.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd an = inv.asDiagonal() * a * inv.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(an);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0.0) || smax / smin > opt.max_condition) {
      m.ill_conditioned = true;
      return m;
    }
    if (m.cost == 0.0) {
      m.converged = true;
      return m;
    }
    bool accepted = false;
    double step_rel = 0.0, decrease = 0.0;
    while (lambda < 1e16) {
      Eigen::MatrixXd lhs = an;
      lhs.diagonal().array() += lambda;
      const Eigen::VectorXd delta = inv.asDiagonal() * lhs.ldlt().solve(-(inv.asDiagonal() * g));
      const Eigen::VectorXd trial = obj.clamp(m.v + delta);
      const double c = obj.cost(trial);
      if (c < m.cost) {
        step_rel = 0.0;
        for (Eigen::Index i = 0; i < trial.size(); ++i)
          step_rel = std::max(step_rel, std::abs(trial(i) - m.v(i)) / obj.typical(static_cast<std::size_t>(i), m.v(i)));
        decrease = (m.cost - c) / m.cost;
        m.v = trial;
        m.cost = c;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      m.converged = true;
      ++m.iterations;
      return m;
    }
    m.history.push_back(std::sqrt(m.cost));
    if (decrease < opt.tolerance || step_rel < opt.tolerance) {
      m.converged = true;
      ++m.iterations;
      return m;
    }
  }
  return m;
}

Minimum nelder_mead(const Objective& obj, const Eigen::VectorXd& start, const FitOptions& opt) {
  const auto n = static_cast<Eigen::Index>(obj.size());
  std::vector<Eigen::VectorXd> s(static_cast<std::size_t>(n + 1), start);
  std::vector<double> f(static_cast<std::size_t>(n + 1));
  for (Eigen::Index k = 0; k < n; ++k) {
    auto& v = s[static_cast<std::size_t>(k + 1)];
    v(k) += 0.05 * obj.typical(static_cast<std::size_t>(k), start(k));
    v = obj.clamp(v);
    if (v(k) == start(k)) v(k) = start(k) - 0.05 * obj.typical(static_cast<std::size_t>(k), start(k));
    v = obj.clamp(v);
  }
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = obj.cost(s[i]);
  Minimum m;
  const int max_eval = 400 * static_cast<int>(n + 1) * std::max(1, opt.max_iterations / 100);
  int evals = 0;
  std::vector<std::size_t> order(s.size());
  while (evals < max_eval) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (m.history.empty() || std::sqrt(f[best]) < m.history.back()) m.history.push_back(std::sqrt(f[best]));
    if (f[worst] - f[best] <= opt.tolerance * (std::abs(f[best]) + 1e-300)) {
      m.converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (i != worst) centroid += s[i];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd xr = obj.clamp(centroid + (centroid - s[worst]));
    const double fr = obj.cost(xr);
    ++evals;
    if (fr < f[best]) {
      const Eigen::VectorXd xe = obj.clamp(centroid + 2.0 * (centroid - s[worst]));
      const double fe = obj.cost(xe);
      ++evals;
      if (fe < fr) {
        s[worst] = xe;
        f[worst] = fe;
      } else {
        s[worst] = xr;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      s[worst] = xr;
      f[worst] = fr;
    } else {
      const Eigen::VectorXd xc = obj.clamp(centroid + 0.5 * (s[worst] - centroid));
      const double fc = obj.cost(xc);
      ++evals;
      if (fc < f[worst]) {
        s[worst] = xc;
        f[worst] = fc;
      } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (i == best) continue;
          s[i] = obj.clamp(s[best] + 0.5 * (s[i] - s[best]));
          f[i] = obj.cost(s[i]);
          ++evals;
        }
      }
    }
    ++m.iterations;
  }
  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  m.v = s[best];
  m.cost = f[best];
  return m;
}

}  // namespace

Model make_model(const std::string& id, int n_spins) {
  if (id == "Gaussian3" || id == "gaussian3") return gaussian3_model();
  if (n_spins < 2) throw ConfigError("model '" + id + "' needs the number of spins (n_spins >= 2)");
  if (id.size() == 2 && (id[0] == 'A' || id[0] == 'a'))
    return transport_model(id, analytic::transport_formula_from_string(id), n_spins);
  if (id.size() == 5 && (id[0] == 'B' || id[0] == 'b') && id[2] == '.') {
    const auto f = analytic::mqc_formula_from_string(id.substr(0, 2));
    const auto order = id.substr(3);
    if (order == "J0") return mqc_model(id, f, false, n_spins);
    if (order == "J2") return mqc_model(id, f, true, n_spins);
  }
  std::string known;
  for (const auto& m : model_ids()) known += (known.empty() ? "" : ", ") + m;
  throw ConfigError("unknown model '" + id + "' (expected one of " + known + ")");
}

std::vector<std::string> model_ids() {
  std::vector<std::string> ids{"A1", "A2", "A3", "A4"};
  for (const char* b : {"B1", "B2", "B3", "B4"})
    for (const char* j : {".J0", ".J2"}) ids.push_back(std::string(b) + j);
  ids.push_back("Gaussian3");
  return ids;
}

double FitResult::value(const std::string& name) const {
  for (const auto& p : estimates)
    if (p.name == name) return p.value;
  throw DomainError("no fitted parameter named '" + name + "'");
}

FitResult fit_curve(const FitProblem& problem) {
  const Model model = make_model(problem.model_id, problem.n_spins);
  if (problem.x.size() != problem.y.size()) throw DimensionError("x and y have different lengths");
  if (problem.parameters.size() != model.parameter_names.size())
    throw DomainError("model " + model.id + " takes " + std::to_string(model.parameter_names.size()) + " parameters");
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < problem.parameters.size(); ++i) {
    const auto& p = problem.parameters[i];
    if (p.name != model.parameter_names[i])
      throw DomainError("parameter " + std::to_string(i) + " must be '" + model.parameter_names[i] + "'");
    if (!(p.lo <= p.hi)) throw DomainError("parameter '" + p.name + "' has empty bounds");
    if (!std::isfinite(p.value)) throw DomainError("parameter '" + p.name + "' has no finite initial value");
    if (!p.fixed) ++n_free;
  }
  if (n_free == 0) throw DomainError("at least one parameter must be free");
  if (problem.y.size() <= n_free) throw DomainError("need more data points than free parameters");
  for (double v : problem.y)
    if (!std::isfinite(v)) throw NumericalError("data contain non-finite values");
  const auto [lo_it, hi_it] = std::minmax_element(problem.y.begin(), problem.y.end());
  if (*lo_it == *hi_it) throw NumericalError("data are constant; the fit is degenerate");

  std::vector<std::size_t> idx(problem.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return problem.x[a] < problem.x[b] || (problem.x[a] == problem.x[b] && problem.y[a] < problem.y[b]);
  });
  std::vector<double> x(idx.size()), y(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    x[i] = problem.x[idx[i]];
    y[i] = problem.y[idx[i]];
  }

  const Objective obj(model, x, y, problem.parameters);
  FitResult r;
  r.model_id = model.id;
  r.initial_residual_norm = std::sqrt(obj.cost(obj.initial()));
  Minimum m = levenberg_marquardt(obj, problem.options);
  r.method = "levenberg-marquardt";
  if (m.ill_conditioned) {
    const auto lm_iterations = m.iterations;
    auto hist = m.history;
    m = nelder_mead(obj, m.v, problem.options);
    m.iterations += lm_iterations;
    hist.insert(hist.end(), m.history.begin(), m.history.end());
    m.history = std::move(hist);
    r.method = "nelder-mead";
  }
  r.estimates = obj.estimates(m.v);
  r.residual_norm = std::sqrt(m.cost);
  r.converged = m.converged;
  r.iterations = m.iterations;
  r.history = std::move(m.history);

  r.uncertainties.assign(r.estimates.size(), 0.0);
  const Eigen::MatrixXd j = obj.jacobian(m.v);
  const auto dof = static_cast<double>(y.size() - obj.size());
  const Eigen::MatrixXd a = j.transpose() * j;
  Eigen::VectorXd d = a.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) > 0.0)) d(i) = 1.0;
  const Eigen::MatrixXd an = d.cwiseInverse().asDiagonal() * a * d.cwiseInverse().asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(an);
  lu.setThreshold(1e-14);
  if (lu.isInvertible()) {
    const Eigen::MatrixXd cov =
        d.cwiseInverse().asDiagonal() * lu.inverse() * d.cwiseInverse().asDiagonal() * (m.cost / dof);
    for (std::size_t k = 0; k < obj.size(); ++k)
      r.uncertainties[obj.free_indices()[k]] =
          std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))));
  } else {
    for (auto i : obj.free_indices()) r.uncertainties[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<Parameter> default_transport_parameters(const std::vector<double>& x, const std::vector<double>& y,
                                                    double b_guess) {
  if (x.empty() || y.empty()) throw DomainError("empty data");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  const double span = *xhi - *xlo;
  const double amp = std::max(*hi - *lo, 1e-12);
  const double bb = std::abs(b_guess);
  return {
      {"scale", 1.0, -1e6, 1e6, false, amp},
      {"baseline", 0.0, -1e6, 1e6, false, amp},
      {"b", b_guess, b_guess < 0 ? -10 * bb : 0.1 * bb, b_guess < 0 ? -0.1 * bb : 10 * bb, false, bb},
      {"shift", 0.0, -0.5 * span, 0.5 * span, false, span > 0 ? 0.01 * span : 1e-6},
  };
}

double gaussian3_delta_hz(double b) { return 4.0 * std::abs(b) / (2.0 * constants::pi); }

std::vector<Parameter> default_gaussian3_parameters(double delta_hz, double peak) {
  const double a = std::max(std::abs(peak), 1e-12);
  return {
      {"a0", peak, -10 * a, 10 * a, false, a},
      {"a_plus", 0.5 * peak, -10 * a, 10 * a, false, a},
      {"a_minus", 0.5 * peak, -10 * a, 10 * a, false, a},
      {"width_hz", 0.5 * delta_hz, 0.01 * delta_hz, 4.0 * delta_hz, false, delta_hz},
      {"delta_hz", delta_hz, delta_hz, delta_hz, true, delta_hz},
      {"center_hz", 0.0, -delta_hz, delta_hz, true, delta_hz},
  };
}

FitResult fit_lineshape3(const Spectrum& spectrum, double delta_hz, const Lineshape3Options& options) {
  if (!(delta_hz > 0.0)) throw DomainError("Gaussian3 line spacing must be positive");
  if (spectrum.freq_hz.size() != spectrum.amplitude.size()) throw DimensionError("spectrum axes differ in length");
  if (spectrum.freq_hz.empty()) throw DomainError("empty spectrum");
  const auto [flo, fhi] = std::minmax_element(spectrum.freq_hz.begin(), spectrum.freq_hz.end());
  if (*flo > -3.0 * delta_hz || *fhi < 3.0 * delta_hz)
    throw DomainError("spectrum must cover +-3 delta around the centre");
  FitProblem p;
  p.model_id = "Gaussian3";
  p.options = options.fit;
  double peak = 0.0, best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.freq_hz.size(); ++i) {
    const double f = spectrum.freq_hz[i];
    if (std::abs(f) < options.window * delta_hz) {
      p.x.push_back(f);
      p.y.push_back(spectrum.amplitude[i]);
    }
    if (std::abs(f) < best) {
      best = std::abs(f);
      peak = spectrum.amplitude[i];
    }
  }
  FitResult best_fit;
  bool have = false;
  for (double w0 : options.start_widths) {
    p.parameters = default_gaussian3_parameters(delta_hz, peak != 0.0 ? peak : 1.0);
    p.parameters[3].value = w0 * delta_hz;
    p.parameters[5].fixed = !options.fit_center;
    auto r = fit_curve(p);
    if (!have || r.residual_norm < best_fit.residual_norm) {
      best_fit = std::move(r);
      have = true;
    }
  }
  if (!have) throw DomainError("no starting widths given");
  return best_fit;
}

double outer_amplitude(const FitResult& fit) { return 0.5 * (fit.value("a_plus") + fit.value("a_minus")); }

std::vector<double> add_noise(const std::vector<double>& y, double relative, std::uint64_t seed) {
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, relative * scale);
  auto out = y;
  for (double& v : out) v += g(rng);
  return out;
}

nlohmann::json to_json(const FitResult& r) {
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    const auto& p = r.estimates[i];
    params.push_back({{"name", p.name},
                      {"value", p.value},
                      {"uncertainty", std::isfinite(r.uncertainties[i]) ? nlohmann::json(r.uncertainties[i]) : nlohmann::json()},
                      {"fixed", p.fixed}});
  }
  return {{"schema_version", 1},
          {"model", r.model_id},
          {"parameters", params},
          {"residual_norm", r.residual_norm},
          {"initial_residual_norm", r.initial_residual_norm},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"method", r.method}};
}

nlohmann::json to_json(const FitProblem& p) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& q : p.parameters) {
    nlohmann::json e{{"name", q.name}, {"value", q.value}, {"fixed", q.fixed}};
    if (std::isfinite(q.lo)) e["lo"] = q.lo;
    if (std::isfinite(q.hi)) e["hi"] = q.hi;
    params.push_back(e);
  }
  return {{"schema_version", 1}, {"model", p.model_id}, {"n_spins", p.n_spins}, {"points", p.x.size()},
          {"parameters", params}};
}

}  // namespace spinchain
