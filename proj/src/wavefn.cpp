#include "ptchain/wavefn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptchain/errors.hpp"

namespace ptchain {

namespace {
constexpr double kNegligibleAmplitude = 1e-12;
constexpr double kUndefinedAngle = 1e-14;
} // namespace

std::vector<AmplitudePhaseProfile> amplitude_phase(const Eigenvector& psi) {
    Complex gauge{1.0, 0.0};
    for (const Complex& x : psi.amplitudes) {
        if (std::abs(x) > kNegligibleAmplitude) {
            gauge = std::conj(x) / std::abs(x);
            break;
        }
    }

    std::vector<AmplitudePhaseProfile> profile;
    profile.reserve(psi.amplitudes.size());
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
        const Complex v = psi.amplitudes[i] * gauge;
        AmplitudePhaseProfile p;
        p.site = static_cast<int>(i) + 1;
        p.amplitude = std::abs(v);
        if (p.amplitude > 0.0) {
            p.phase = std::arg(v);
            if (p.phase <= -std::numbers::pi) p.phase = std::numbers::pi;
        }
        profile.push_back(p);
    }
    return profile;
}

double theta_gamma(double k, double gamma, double hopping, int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0) {
        throw ValidationError("theta_gamma needs even N, got N=" + std::to_string(n_sites));
    }
    const int half = n_sites / 2;
    const double inner = std::sin(k * half);
    double num = gamma * inner;
    double den = hopping * std::sin(k * (half + 1));
    if (std::abs(num) < kUndefinedAngle && std::abs(den) < kUndefinedAngle) {
        throw ValidationError("theta_gamma undefined: numerator and denominator both vanish");
    }
    // B/A = den/(J sin(kN/2)) + i gamma/J; align signs so the imaginary
    // part is non-negative.
    if (inner < 0.0) {
        num = -num;
        den = -den;
    }
    double theta = std::atan2(num, den);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    return theta;
}

bool pt_symmetry_check(const Eigenvector& psi, double tolerance) {
    const auto& a = psi.amplitudes;
    double peak = 0.0;
    for (const Complex& x : a) peak = std::max(peak, std::abs(x));
    double worst = 0.0;
    for (std::size_t i = 0, j = a.size(); i < a.size(); ++i) {
        --j;
        worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(a[j])));
    }
    return worst <= tolerance * peak;
}

std::size_t ground_state_index(const Spectrum& spectrum) {
    const auto& e = spectrum.eigenvalues;
    const auto it = std::min_element(e.begin(), e.end(), [](const Complex& x, const Complex& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return static_cast<std::size_t>(it - e.begin());
}

} // namespace ptchain
