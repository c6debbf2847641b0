#pragma once

#include <vector>

#include "ptchain/chain.hpp"

namespace ptchain {

/// Real quasimomenta in (0, pi) at which the secular function vanishes.
/// Exactly symmetric about pi/2 by construction.
struct RootSet {
    std::vector<double> roots;       ///< ascending
    /// 1 for a sign change, 2 for a touching zero, 3 for a flat zero at
    /// pi/2 (odd N only).
    std::vector<int> multiplicities;
    std::vector<double> residuals;   ///< |M(k)| at each reported root
    int total_count = 0;
};

/// Secular function M(k) of the chain: real eigenvalues E = -2J cos k
/// are exactly the zeros of M on (0, pi).
///
///   M(k) = [sin^2(k(m+1)) + (gamma/J)^2 sin^2(km)] sin(k(N-2m+1))
///          + sin^2(km) sin(k(N-2m-1)) - 2 sin(km) sin(k(m+1)) sin(k(N-2m))
///
/// Satisfies M(pi - k) = (-1)^N M(k).
double eval_secular(double k, const ChainSpec& spec);

/// dM/dk, analytic.
double eval_secular_derivative(double k, const ChainSpec& spec);

/// Nearest-neighbour impurities (even N, m = N/2):
/// J^2 sin^2(k(N/2+1)) - (J^2 - gamma^2) sin^2(kN/2). Throws on odd N.
double eval_secular_nearest(double k, int n_sites, double gamma, double hopping = 1.0);

/// Next-nearest-neighbour impurities (odd N, m = (N-1)/2), with
/// N0 = (N+1)/2:
/// cos k [sin^2(k N0) + (gamma/J)^2 sin^2(k(N0-1))] - sin(k N0) sin(k(N0-1)).
/// Throws on even N.
double eval_secular_next_nearest(double k, int n_sites, double gamma, double hopping = 1.0);

/// 1e-13 * max(1, (gamma/J)^2).
double default_root_tolerance(const ChainSpec& spec);

/// Finds every real root of M on (0, pi) with multiplicity.
///
/// The left half (0, pi/2) is scanned on a uniform grid of
/// `grid_points` cells over (0, pi) (rounded up to even), evaluating M in
/// extended precision. Sign changes are
/// bisected to machine precision and Newton-polished. Where M keeps its
/// sign but |M| dips, the extremum is located through M' and either splits
/// into two simple roots or, if |M| there is below tolerance * max|M|, is
/// reported as a double root. Cells holding both a root and an extremum are
/// subdivided. Roots are mirrored to (pi/2, pi); for odd N the root at pi/2
/// is inserted directly.
///
/// total_count == N exactly when the spectrum is entirely real.
///
/// Throws ValidationError if grid_points < 8N or tolerance <= 0, and
/// GridTooCoarseError when the count cannot be certified (more than N
/// roots, or a count of the wrong parity).
RootSet find_real_roots(const ChainSpec& spec, int grid_points, double tolerance);

/// Defaults: 16N grid cells, default_root_tolerance(spec).
RootSet find_real_roots(const ChainSpec& spec);

} // namespace ptchain
