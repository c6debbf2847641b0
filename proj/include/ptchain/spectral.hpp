#pragma once

#include <vector>

#include "ptchain/chain.hpp"

namespace ptchain {

/// Bethe-ansatz coefficients of an eigenstate:
///   psi_n = A sin(kn)               for n <= m
///   psi_n = P sin(kn) + Q cos(kn)   for m <= n <= mbar
///   psi_n = B sin(k nbar)           for n >= mbar, nbar = N + 1 - n
struct BetheCoefficients {
    Complex a;
    Complex p;
    Complex q;
    Complex b;
};

struct Eigenvector {
    Complex energy;
    /// psi_1..psi_N stored at 0..N-1; max |psi_n| = 1 and the first
    /// non-negligible amplitude is real and positive.
    std::vector<Complex> amplitudes;
    /// k with E = -2J cos k (principal branch, complex when E is).
    Complex quasimomentum;
    BetheCoefficients region_coeffs;
    /// ||H psi - E psi|| / ||psi||
    double residual = 0.0;
    /// E sits inside the exceptional-point window; the residual bound is
    /// relaxed and the state is not separated from its partner.
    bool near_exceptional_point = false;
};

struct SpectrumClassification {
    int n_real = 0;
    int n_complex = 0;
    double degree_of_breaking = 0.0; ///< n_complex / N
    double max_imag = 0.0;           ///< largest |Im E|
};

/// det(H - E) as mantissa * 2^exponent, from the three-term recurrence.
struct ScaledDeterminant {
    Complex mantissa;
    long exponent = 0;

    Complex value() const;
};

/// Default relative classification tolerance: |Im E| <= 1e-8 * 2J is real.
inline constexpr double kDefaultClassificationTolerance = 1e-8;

/// Eigenvalues closer than this times 2J are flagged degenerate.
inline constexpr double kExceptionalPointWindow = 1e-6;

/// det(H - E I) by D_n = (d_n - E) D_{n-1} - J^2 D_{n-2}, rescaled by
/// powers of two so that large N does not overflow.
ScaledDeterminant char_poly_scaled(Complex energy, const ChainSpec& spec);

/// char_poly_scaled(...).value(); overflows to infinity for very large N.
Complex char_poly_eval(Complex energy, const ChainSpec& spec);

/// All N eigenvalues by Aberth-Ehrlich iteration on the characteristic
/// polynomial, seeded from the gamma = 0 spectrum with a small imaginary
/// jitter. The result is conjugate-symmetrised and classified with
/// |Im E| <= tolerance * 2J counted as real.
///
/// A converged set must reproduce tr H and tr H^2; if it does not, the
/// iteration restarts from seeds on a circle around the band. Throws
/// ConvergenceError when no attempt passes.
Spectrum all_eigenvalues(const ChainSpec& spec,
                         double tolerance = kDefaultClassificationTolerance);

/// Same contract as all_eigenvalues, computed by a dense QR eigensolver in
/// extended precision. Slow; meant for cross-validation on small chains.
Spectrum all_eigenvalues_dense(const ChainSpec& spec,
                               double tolerance = kDefaultClassificationTolerance);

/// Pairs raw eigenvalues into conjugates, averages each pair, zeroes the
/// imaginary part of real ones, sorts, and flags near-coincident values.
Spectrum symmetrize_spectrum(std::vector<Complex> raw, double hopping, double tolerance);

/// Eigenvector for an eigenvalue E, by inverse iteration on the
/// tridiagonal matrix, with Bethe coefficients fitted region by region.
///
/// Throws ValidationError if E is not an eigenvalue (residual above the
/// bound). Inside the exceptional-point window the bound is relaxed and
/// near_exceptional_point is set.
Eigenvector eigenvector_for(const ChainSpec& spec, Complex energy);

SpectrumClassification classify(const Spectrum& spectrum);

} // namespace ptchain
