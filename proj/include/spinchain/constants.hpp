#pragma once

// Physical constants (CODATA 2018) and the fluorapatite chain geometry.

namespace spinchain::constants {

inline constexpr double pi = 3.14159265358979323846;

/// Reduced Planck constant, J s.
inline constexpr double hbar = 1.054571817e-34;
/// Vacuum magnetic permeability, N A^-2.
inline constexpr double mu0 = 1.25663706212e-6;
/// 19F gyromagnetic ratio, rad s^-1 T^-1.
inline constexpr double gamma_19F = 2.518148e8;

/// Intra-chain 19F spacing in fluorapatite, m.
inline constexpr double fap_spacing = 0.3442e-9;
/// Distance between neighbouring 19F chains in fluorapatite, m.
inline constexpr double fap_chain_separation = 0.9367e-9;
/// Reference nearest-neighbour coupling of the fluorapatite chain, rad/s.
inline constexpr double fap_coupling = 8.17e3;

}  // namespace spinchain::constants
