#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "spinchain/trace.hpp"

// Closed-form results for the uniform nearest-neighbour chain under the DQ
// Hamiltonian. Site indices j, q are 1-based here, matching the usual
// single-particle notation.

namespace spinchain::analytic {

using cplx = std::complex<double>;

/// A_{j,q}(t) from the mirror-image Bessel series with nu = N + 1,
/// delta = j - q, sigma = j + q. Orders above 2|b|t + 40 are dropped.
cplx amplitude_series(int j, int q, double t, int n, double b);

/// Single-particle eigenmodes of the open N-site hopping chain.
class HoppingModes {
 public:
  /// Closed form: psi_k = k pi / (N + 1), modes sqrt(2/(N+1)) sin(j psi_k).
  explicit HoppingModes(int n);
  /// Numerical diagonalisation of the hopping matrix (independent check).
  static HoppingModes numerical(int n);

  int size() const noexcept { return n_; }
  /// cos(psi_k) equivalent: eigenvalue of the hopping matrix divided by 2.
  const Eigen::VectorXd& cosines() const noexcept { return cos_; }
  /// Column k is mode k, row j-1 is site j.
  const Eigen::MatrixXd& modes() const noexcept { return modes_; }

  /// sum_k u_jk u_qk exp(2 i b t cos psi_k).
  cplx amplitude(int j, int q, double t, double b) const;
  /// A_{j,q}(t) for all q at fixed j.
  Eigen::VectorXcd row(int j, double t, double b) const;

 private:
  HoppingModes() = default;
  int n_ = 0;
  Eigen::VectorXd cos_;
  Eigen::MatrixXd modes_;
};

/// Amplitudes of an N-site chain with coupling b.
struct FermionAmplitudes {
  int n = 0;
  double b = 0.0;
  HoppingModes modes;

  FermionAmplitudes(int n_sites, double coupling) : n(n_sites), b(coupling), modes(n_sites) {}
  cplx operator()(int j, int q, double t) const { return modes.amplitude(j, q, t, b); }
};

enum class TransportFormula { A1, A2, A3, A4 };
enum class MqcFormula { B1, B2, B3, B4 };

TransportFormula transport_formula_from_string(const std::string& s);
MqcFormula mqc_formula_from_string(const std::string& s);
const char* to_string(TransportFormula f);
const char* to_string(MqcFormula f);

/// Normalised transport signal at one time.
///   A1 = (1/N) sum_p A_pp(2t)
///   A2 = sum_p A_1p(t)^2
///   A3 = A_11(t)^2 + A_1N(t)^2
///   A4 = Im[A_12(2t) + A_{N-1,N}(2t)]   (normalised by Tr[rho0^2], so A4(0) = 0)
double transport_value(TransportFormula f, int n, double b, double t);
SignalTrace transport_curve(TransportFormula f, int n, double b, const std::vector<double>& times);

struct MqcPair {
  double j0 = 0.0;
  double j2 = 0.0;
};

/// Zero- and double-quantum intensities.
///   B1, B2 as printed.
///   B3: 4/(N+1)^2 sum_{k,h} s_k s_h cos^2[2bt(c_k + c_h)] (1 + (-1)^{k+h}) for J0,
///       2/(N+1)^2 ... sin^2[...] for J2, with s = sin^2 psi, c = cos psi.
///   B4: J0 = 2/(N+1) sum sin psi sin 2psi sin(8bt cos psi), J2 = -J0/2.
MqcPair mqc_value(MqcFormula f, int n, double b, double t);

enum class TransportCase { ThermalCollective, EndCollective, ThermalEnd, EndEnd, LogicalYCollective };

TransportFormula formula_for(TransportCase c);
TransportCase transport_case(const std::string& init, const std::string& readout);

/// Same observables as transport_curve from the hopping eigenbasis,
/// O(N^2) per time point. Suitable for N up to ~1e4.
SignalTrace freefermion_transport(int n, double b, const std::vector<double>& times, TransportCase c);

/// |A_{1,q}(t)|^2 for q = 1..N.
std::vector<double> site_profile(const HoppingModes& modes, double b, double t);

/// First t on `times` at which |A_{1,site}|^2 reaches half of its first local
/// maximum. NaN if it never does.
double front_arrival_time(int n, double b, int site, const std::vector<double>& times);

}  // namespace spinchain::analytic
