#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptchain/chain.hpp"
#include "ptchain/spectral.hpp"

namespace ptchain {

/// Which test decides "all eigenvalues real" during the bisection.
enum class PhasePredicate {
    Secular, ///< find_real_roots count == N (certified by the polynomial eigensolver)
    Dense,   ///< brute-force dense eigensolver, small N only
};

struct CriticalOptions {
    double tolerance = 1e-8;    ///< bracket width, units of J
    double gamma_cap = 2.0;     ///< search ceiling, units of J
    int coarse_steps = 64;      ///< uniform scan before bisecting
    PhasePredicate predicate = PhasePredicate::Secular;
};

/// Critical strength bracketed from both sides. All values are raw
/// energies (multiply-by-J already applied).
struct CriticalResult {
    double gamma_pt = 0.0;    ///< bracket midpoint
    double gamma_low = 0.0;   ///< spectrum fully real here
    double gamma_high = 0.0;  ///< at least one conjugate pair here
    double tolerance = 0.0;
    int n_complex_just_above = 0;
};

struct PhasePoint {
    int n_sites = 0;
    int impurity_site = 0;
    double mu = 0.0;
    double gamma_pt = 0.0;
    int n_complex_saturated = 0;
    /// Set when this point failed; the numeric fields are then unset.
    std::optional<std::string> error;
};

struct ScalingFit {
    double mu = 0.0;
    std::vector<int> sample_sizes;
    std::vector<double> gamma_pts;
    double exponent = 0.0;  ///< slope of log gamma_pt vs log N
    double log_prefactor = 0.0;
    double residual = 0.0;  ///< RMS deviation of the log-log fit
};

/// gamma_PT(N, m): largest gamma with an entirely real spectrum.
///
/// Scans [0, cap] coarsely for the first broken point, then bisects down
/// to the tolerance. The eigensolver then has to agree: fully real at
/// gamma_low - 1e-6 J and broken at gamma_high + 1e-6 J, otherwise
/// NumericalError. n_complex_just_above is counted at that upper point.
/// Throws DomainError
/// if the spectrum stays real up to the cap.
CriticalResult critical_gamma(int n_sites, int impurity_site, double hopping = 1.0,
                              const CriticalOptions& options = {});

/// Number of complex eigenvalues at the given strength.
int broken_count(int n_sites, int impurity_site, double gamma, double hopping = 1.0,
                 double classification_tolerance = kDefaultClassificationTolerance);

/// max(2J, 2J(N+1)/(3 pi)): past every closest-impurity breaking point.
double saturation_gamma(int n_sites, double hopping = 1.0);

/// Odd-N closest impurities (m = (N-1)/2).
struct OddClosestThreshold {
    /// Quasimomentum in (pi/(N+1), 2pi/(N+1)) where the first pair merges.
    double merge_quasimomentum = 0.0;
    /// J / (2 cos k_d), the closed form; tends to J/2 as N grows.
    double closed_form = 0.0;
    /// J * sqrt(max (gamma/J)^2 along the reduced secular curve) at k_d;
    /// the exact merge strength.
    double merge_strength = 0.0;
};

OddClosestThreshold odd_closest_threshold_detail(int n_sites, double hopping = 1.0);

/// J / (2 cos k_d). Throws ValidationError unless N is odd and >= 5.
double odd_closest_threshold(int n_sites, double hopping = 1.0);

/// Large-N estimate round(N (1 - 2 mu)) of real quasimomenta for gamma != 0.
/// Rejects mu outside (0, 1/2) or N (1 - 2 mu) < 1.
int approx_real_root_count(int n_sites, double mu);

/// One PhasePoint per impurity site, in the order given. Independent
/// points run concurrently; a failing point records its error and the
/// sweep continues.
std::vector<PhasePoint> sweep_phase_diagram(int n_sites, const std::vector<int>& impurity_sites,
                                            double hopping = 1.0,
                                            const CriticalOptions& options = {});

/// Least-squares slope of log gamma_PT against log N at fixed mu.
/// Needs >= 4 strictly increasing sizes with integer mu*N.
ScalingFit fit_fragility_scaling(double mu, const std::vector<int>& sample_sizes,
                                 double hopping = 1.0, const CriticalOptions& options = {});

} // namespace ptchain
