#pragma once

#include <cstddef>
#include <vector>

#include "ptchain/spectral.hpp"

namespace ptchain {

struct AmplitudePhaseProfile {
    int site = 0;           ///< 1-based
    double amplitude = 0.0; ///< |psi_n|
    double phase = 0.0;     ///< arg psi_n in (-pi, pi]; 0 where the amplitude vanishes
};

/// Per-site modulus and phase. The global phase is fixed so that the first
/// site with amplitude above 1e-12 has phase 0; no unwrapping.
std::vector<AmplitudePhaseProfile> amplitude_phase(const Eigenvector& psi);

/// Phase of B/A for nearest-neighbour impurities (even N):
/// tan(theta) = gamma sin(kN/2) / (J sin(k(1 + N/2))), returned in [0, pi).
/// Throws ValidationError for odd N or when both parts are below 1e-14.
double theta_gamma(double k, double gamma, double hopping, int n_sites);

/// max_n ||psi_n| - |psi_{N+1-n}|| <= tolerance * max |psi|.
bool pt_symmetry_check(const Eigenvector& psi, double tolerance);

/// Index of the ground state in a sorted spectrum: most negative real part,
/// then most negative imaginary part.
std::size_t ground_state_index(const Spectrum& spectrum);

} // namespace ptchain
