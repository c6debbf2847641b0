#include "ptchain/chain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptchain/errors.hpp"

namespace ptchain {

ChainSpec::ChainSpec(int n_sites, int impurity_site, double gamma, double hopping)
    : n_sites_(n_sites), impurity_site_(impurity_site), gamma_(gamma), hopping_(hopping) {
    if (n_sites < 2) {
        throw ValidationError("chain needs at least 2 sites, got N=" + std::to_string(n_sites));
    }
    if (impurity_site < 1 || impurity_site > n_sites / 2) {
        throw ValidationError("impurity site m=" + std::to_string(impurity_site) +
                              " outside [1, " + std::to_string(n_sites / 2) + "] for N=" +
                              std::to_string(n_sites));
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw ValidationError("impurity strength must be finite and non-negative");
    }
    if (!(hopping > 0.0) || !std::isfinite(hopping)) {
        throw ValidationError("hopping must be finite and positive");
    }
}

ChainSpec ChainSpec::with_gamma(double gamma) const {
    return ChainSpec(n_sites_, impurity_site_, gamma, hopping_);
}

Complex ChainSpec::onsite(int site) const noexcept {
    if (site == impurity_site_) return {0.0, gamma_};
    if (site == mirror_impurity_site()) return {0.0, -gamma_};
    return {0.0, 0.0};
}

std::vector<Complex> ChainSpec::onsite_potentials() const {
    std::vector<Complex> d(static_cast<std::size_t>(n_sites_));
    for (int n = 1; n <= n_sites_; ++n) d[static_cast<std::size_t>(n - 1)] = onsite(n);
    return d;
}

int mirror_site(int n, int n_sites) {
    if (n < 1 || n > n_sites) {
        throw ValidationError("site " + std::to_string(n) + " outside [1, " +
                              std::to_string(n_sites) + "]");
    }
    return n_sites + 1 - n;
}

ComplexMatrix build_hamiltonian(const ChainSpec& spec) {
    const int n = spec.n_sites();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = -spec.hopping();
        h(i + 1, i) = -spec.hopping();
    }
    h(spec.impurity_site() - 1, spec.impurity_site() - 1) = Complex(0.0, spec.gamma());
    h(spec.mirror_impurity_site() - 1, spec.mirror_impurity_site() - 1) = Complex(0.0, -spec.gamma());
    return h;
}

std::vector<double> analytic_spectrum_hermitian(int n_sites, double hopping) {
    if (n_sites < 1) {
        throw ValidationError("chain length must be positive, got N=" + std::to_string(n_sites));
    }
    std::vector<double> energies;
    energies.reserve(static_cast<std::size_t>(n_sites));
    // alpha = 1..N already gives ascending energies.
    for (int alpha = 1; alpha <= n_sites; ++alpha) {
        energies.push_back(-2.0 * hopping * std::cos(alpha * std::numbers::pi / (n_sites + 1)));
    }
    return energies;
}

} // namespace ptchain
