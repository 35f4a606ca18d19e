#include "spinchain/analytic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "spinchain/constants.hpp"
#include "spinchain/errors.hpp"

namespace spinchain::analytic {

namespace {

using constants::pi;

cplx i_pow(long long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double bessel_j(long long order, double x) {
  const long long m = order < 0 ? -order : order;
  const double v = std::cyl_bessel_j(static_cast<double>(m), x);
  return (order < 0 && (m % 2) == 1) ? -v : v;
}

// sum over p of i^o J_o(x), o = base + 2 p nu, |o| <= limit.
cplx image_sum(long long base, long long nu, double x, double limit) {
  cplx s = 0.0;
  const auto lo = static_cast<long long>(std::ceil((-limit - static_cast<double>(base)) / (2.0 * static_cast<double>(nu))));
  const auto hi = static_cast<long long>(std::floor((limit - static_cast<double>(base)) / (2.0 * static_cast<double>(nu))));
  for (long long p = lo; p <= hi; ++p) {
    const long long o = base + 2 * p * nu;
    s += i_pow(o) * bessel_j(o, x);
  }
  return s;
}

void check_site(int j, int n) {
  if (j < 1 || j > n) throw DomainError("site index " + std::to_string(j) + " outside 1.." + std::to_string(n));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

cplx amplitude_series(int j, int q, double t, int n, double b) {
  if (n < 1) throw DomainError("chain needs at least one site");
  check_site(j, n);
  check_site(q, n);
  const double x = 2.0 * b * t;
  if (x < 0.0) return std::conj(amplitude_series(j, q, -t, n, b));
  const long long nu = n + 1;
  const double limit = x + 40.0;
  return image_sum(j - q, nu, x, limit) - image_sum(j + q, nu, x, limit);
}

HoppingModes::HoppingModes(int n) : n_(n) {
  if (n < 1) throw DomainError("chain needs at least one site");
  cos_.resize(n);
  modes_.resize(n, n);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int k = 1; k <= n; ++k) {
    const double psi = k * pi / (n + 1);
    cos_(k - 1) = std::cos(psi);
    for (int j = 1; j <= n; ++j) modes_(j - 1, k - 1) = norm * std::sin(j * psi);
  }
}

HoppingModes HoppingModes::numerical(int n) {
  if (n < 1) throw DomainError("chain needs at least one site");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) h(j, j + 1) = h(j + 1, j) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  HoppingModes m;
  m.n_ = n;
  m.cos_ = es.eigenvalues() / 2.0;
  m.modes_ = es.eigenvectors();
  return m;
}

cplx HoppingModes::amplitude(int j, int q, double t, double b) const {
  check_site(j, n_);
  check_site(q, n_);
  cplx s = 0.0;
  for (int k = 0; k < n_; ++k) s += modes_(j - 1, k) * modes_(q - 1, k) * std::polar(1.0, 2.0 * b * t * cos_(k));
  return s;
}

Eigen::VectorXcd HoppingModes::row(int j, double t, double b) const {
  check_site(j, n_);
  Eigen::VectorXcd w(n_);
  for (int k = 0; k < n_; ++k) w(k) = modes_(j - 1, k) * std::polar(1.0, 2.0 * b * t * cos_(k));
  return modes_.cast<cplx>() * w;
}

TransportFormula transport_formula_from_string(const std::string& s) {
  const auto l = lower(s);
  if (l == "a1") return TransportFormula::A1;
  if (l == "a2") return TransportFormula::A2;
  if (l == "a3") return TransportFormula::A3;
  if (l == "a4") return TransportFormula::A4;
  throw ConfigError("unknown transport formula '" + s + "' (expected A1..A4)");
}

MqcFormula mqc_formula_from_string(const std::string& s) {
  const auto l = lower(s);
  if (l == "b1") return MqcFormula::B1;
  if (l == "b2") return MqcFormula::B2;
  if (l == "b3") return MqcFormula::B3;
  if (l == "b4") return MqcFormula::B4;
  throw ConfigError("unknown MQC formula '" + s + "' (expected B1..B4)");
}

const char* to_string(TransportFormula f) {
  static const char* names[] = {"A1", "A2", "A3", "A4"};
  return names[static_cast<int>(f)];
}

const char* to_string(MqcFormula f) {
  static const char* names[] = {"B1", "B2", "B3", "B4"};
  return names[static_cast<int>(f)];
}

double transport_value(TransportFormula f, int n, double b, double t) {
  if (n < 2) throw DomainError("transport formulas need N >= 2");
  switch (f) {
    case TransportFormula::A1: {
      cplx s = 0.0;
      for (int p = 1; p <= n; ++p) s += amplitude_series(p, p, 2.0 * t, n, b);
      return s.real() / n;
    }
    case TransportFormula::A2: {
      cplx s = 0.0;
      for (int p = 1; p <= n; ++p) {
        const cplx a = amplitude_series(1, p, t, n, b);
        s += a * a;
      }
      return s.real();
    }
    case TransportFormula::A3: {
      const cplx a = amplitude_series(1, 1, t, n, b);
      const cplx c = amplitude_series(1, n, t, n, b);
      return (a * a + c * c).real();
    }
    case TransportFormula::A4:
      if (n < 4) throw DomainError("A4 needs N >= 4");
      return (amplitude_series(1, 2, 2.0 * t, n, b) + amplitude_series(n - 1, n, 2.0 * t, n, b)).imag();
  }
  return 0.0;
}

SignalTrace transport_curve(TransportFormula f, int n, double b, const std::vector<double>& times) {
  SignalTrace tr;
  tr.times = times;
  tr.values.resize(times.size());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < times.size(); ++k) tr.values[k] = transport_value(f, n, b, times[k]);
  tr.meta = {{"source", "analytic"}, {"formula", to_string(f)}, {"n_spins", n}, {"b_rad_per_s", b}};
  return tr;
}

MqcPair mqc_value(MqcFormula f, int n, double b, double t) {
  if (n < 2) throw DomainError("MQC formulas need N >= 2");
  const double nu = n + 1.0;
  MqcPair out;
  switch (f) {
    case MqcFormula::B1:
      for (int k = 1; k <= n; ++k) {
        const double a = 4.0 * b * t * std::cos(k * pi / nu);
        out.j0 += std::cos(a) * std::cos(a) / n;
        out.j2 += std::sin(a) * std::sin(a) / (2.0 * n);
      }
      break;
    case MqcFormula::B2:
      for (int k = 1; k <= n; ++k) {
        const double psi = k * pi / nu;
        const double s2 = std::sin(psi) * std::sin(psi);
        const double a = 4.0 * b * t * std::cos(psi);
        out.j0 += 2.0 / nu * s2 * std::cos(a) * std::cos(a);
        out.j2 += 1.0 / nu * s2 * std::sin(a) * std::sin(a);
      }
      break;
    case MqcFormula::B3:
      for (int k = 1; k <= n; ++k)
        for (int h = 1; h <= n; ++h) {
          const double pk = k * pi / nu, ph = h * pi / nu;
          const double w = std::pow(std::sin(pk), 2) * std::pow(std::sin(ph), 2) *
                           (1.0 + std::cos(nu * pk) * std::cos(nu * ph));
          const double a = 2.0 * b * t * (std::cos(pk) + std::cos(ph));
          out.j0 += 4.0 / (nu * nu) * w * std::cos(a) * std::cos(a);
          out.j2 += 2.0 / (nu * nu) * w * std::sin(a) * std::sin(a);
        }
      break;
    case MqcFormula::B4:
      if (n < 4) throw DomainError("B4 needs N >= 4");
      for (int k = 1; k <= n; ++k) {
        const double psi = k * pi / nu;
        out.j0 += 2.0 / nu * std::sin(psi) * std::sin(2.0 * psi) * std::sin(8.0 * b * t * std::cos(psi));
      }
      out.j2 = -out.j0 / 2.0;
      break;
  }
  return out;
}

TransportFormula formula_for(TransportCase c) {
  switch (c) {
    case TransportCase::ThermalCollective: return TransportFormula::A1;
    case TransportCase::EndCollective:
    case TransportCase::ThermalEnd: return TransportFormula::A2;
    case TransportCase::EndEnd: return TransportFormula::A3;
    case TransportCase::LogicalYCollective: return TransportFormula::A4;
  }
  return TransportFormula::A1;
}

TransportCase transport_case(const std::string& init, const std::string& readout) {
  const auto i = lower(init), r = lower(readout);
  if (i == "thermal" && r == "collective") return TransportCase::ThermalCollective;
  if (i == "end" && r == "collective") return TransportCase::EndCollective;
  if (i == "thermal" && r == "end") return TransportCase::ThermalEnd;
  if (i == "end" && r == "end") return TransportCase::EndEnd;
  if (i == "yl" && r == "collective") return TransportCase::LogicalYCollective;
  throw ConfigError("no closed form for init '" + init + "' with readout '" + readout +
                    "' (supported: thermal/collective, end/collective, thermal/end, end/end, yL/collective)");
}

SignalTrace freefermion_transport(int n, double b, const std::vector<double>& times, TransportCase c) {
  if (n < 2) throw DomainError("free-fermion transport needs N >= 2");
  if (c == TransportCase::LogicalYCollective && n < 4) throw DomainError("logical transport needs N >= 4");
  const HoppingModes modes(n);
  const Eigen::MatrixXd sq = modes.modes().cwiseProduct(modes.modes());
  const Eigen::VectorXd diag_weight = sq.colwise().sum().transpose();
  SignalTrace tr;
  tr.times = times;
  tr.values.resize(times.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    double v = 0.0;
    switch (c) {
      case TransportCase::ThermalCollective: {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += diag_weight(k) * std::polar(1.0, 4.0 * b * t * modes.cosines()(k));
        v = s.real() / n;
        break;
      }
      case TransportCase::EndCollective:
      case TransportCase::ThermalEnd: {
        const Eigen::VectorXcd r = modes.row(1, t, b);
        v = r.cwiseProduct(r).sum().real();
        break;
      }
      case TransportCase::EndEnd: {
        const Eigen::VectorXcd r = modes.row(1, t, b);
        v = (r(0) * r(0) + r(n - 1) * r(n - 1)).real();
        break;
      }
      case TransportCase::LogicalYCollective:
        v = (modes.amplitude(1, 2, 2.0 * t, b) + modes.amplitude(n - 1, n, 2.0 * t, b)).imag();
        break;
    }
    tr.values[i] = v;
  }
  tr.meta = {{"source", "freefermion"}, {"formula", to_string(formula_for(c))}, {"n_spins", n}, {"b_rad_per_s", b}};
  return tr;
}

std::vector<double> site_profile(const HoppingModes& modes, double b, double t) {
  const Eigen::VectorXcd r = modes.row(1, t, b);
  std::vector<double> out(static_cast<std::size_t>(r.size()));
  for (Eigen::Index q = 0; q < r.size(); ++q) out[static_cast<std::size_t>(q)] = std::norm(r(q));
  return out;
}

double front_arrival_time(int n, double b, int site, const std::vector<double>& times) {
  const HoppingModes modes(n);
  check_site(site, n);
  std::vector<double> v(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) v[i] = std::norm(modes.amplitude(1, site, times[i], b));
  const double floor = 0.01 * *std::max_element(v.begin(), v.end());
  double first_peak = -1.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > floor && v[i] >= v[i - 1] && v[i] > v[i + 1]) {
      first_peak = v[i];
      break;
    }
  if (first_peak <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double half = first_peak / 2.0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] >= half) return times[i - 1] + (half - v[i - 1]) / (v[i] - v[i - 1]) * (times[i] - times[i - 1]);
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace spinchain::analytic
