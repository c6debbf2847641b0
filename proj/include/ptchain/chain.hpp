#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ptchain {

using Complex = std::complex<double>;

/// Dense Hamiltonian. Only used for small-N checks and the brute-force
/// oracle path; production code works on the tridiagonal structure.
using ComplexMatrix = Eigen::MatrixXcd;

/// An open chain of N sites with hopping J and a balanced pair of
/// imaginary impurities +i*gamma at site m and -i*gamma at its mirror
/// site N+1-m. Sites are 1-based.
class ChainSpec {
public:
    /// Throws ValidationError unless N >= 2, 1 <= m <= N/2, gamma >= 0
    /// and hopping > 0.
    ChainSpec(int n_sites, int impurity_site, double gamma, double hopping = 1.0);

    int n_sites() const noexcept { return n_sites_; }
    int impurity_site() const noexcept { return impurity_site_; }
    int mirror_impurity_site() const noexcept { return n_sites_ + 1 - impurity_site_; }
    double gamma() const noexcept { return gamma_; }
    double hopping() const noexcept { return hopping_; }

    /// Relative impurity position m/N, in (0, 1/2].
    double mu() const noexcept { return static_cast<double>(impurity_site_) / n_sites_; }
    double gamma_over_hopping() const noexcept { return gamma_ / hopping_; }

    /// Same chain and impurity sites at a different strength.
    ChainSpec with_gamma(double gamma) const;

    /// Diagonal matrix element at a 1-based site.
    Complex onsite(int site) const noexcept;

    /// All N diagonal entries, index 0 holding site 1.
    std::vector<Complex> onsite_potentials() const;

private:
    int n_sites_;
    int impurity_site_;
    double gamma_;
    double hopping_;
};

/// Eigenvalues of one chain, closed under complex conjugation.
struct Spectrum {
    /// Sorted by (real, imaginary). Real eigenvalues carry an exact zero
    /// imaginary part.
    std::vector<Complex> eigenvalues;
    /// True where another eigenvalue lies inside the exceptional-point
    /// window (closer than 1e-6 * 2J).
    std::vector<bool> degenerate;
    int n_real = 0;
    int n_complex = 0;
    bool broken = false;
};

/// Returns N + 1 - n. Throws ValidationError unless 1 <= n <= N.
int mirror_site(int n, int n_sites);

/// Dense N x N Hamiltonian: -J on the first off-diagonals, +i*gamma at
/// site m, -i*gamma at the mirror site, open boundaries.
ComplexMatrix build_hamiltonian(const ChainSpec& spec);

/// {-2J cos(alpha*pi/(N+1)) : alpha = 1..N}, ascending.
std::vector<double> analytic_spectrum_hermitian(int n_sites, double hopping = 1.0);

} // namespace ptchain
