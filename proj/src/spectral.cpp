#include "ptchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "ptchain/errors.hpp"

namespace ptchain {

namespace {

using Wide = long double;
using WideComplex = std::complex<Wide>;

constexpr Wide kWideEpsilon = std::numeric_limits<Wide>::epsilon();
constexpr int kRescaleExponent = 64;
constexpr int kAberthIterationCap = 800;
constexpr double kSeedJitter = 1e-3;
constexpr double kResidualBound = 1e-9;
constexpr double kRelaxedResidualBound = 1e-6;
constexpr int kInverseIterations = 4;
constexpr Wide kStagnationScale = 1e-6L;
constexpr Wide kTraceCheck = 1e-12L;
constexpr Wide kTraceSlack = 8;
constexpr int kSeedAttempts = 4;
constexpr int kMaxCluster = 4;
constexpr Wide kClusterRadius = 4;
constexpr int kClusterNewtonSteps = 20;

WideComplex scale_pow2(WideComplex v, int e) {
    return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
}

// Determinant, its E-derivative and a magnitude bound, all sharing one
// power-of-two scale.
struct Recurrence {
    WideComplex value;
    WideComplex slope;
    Wide bound;
    long exponent;
};

Recurrence run_recurrence(WideComplex energy, const std::vector<WideComplex>& diagonal,
                          Wide hopping_sq) {
    WideComplex prev2{0}, prev1{1};
    WideComplex slope2{0}, slope1{0};
    Wide bound2 = 0, bound1 = 1;
    long exponent = 0;
    const Wide energy_abs = std::abs(energy);

    for (const WideComplex& d : diagonal) {
        const WideComplex shifted = d - energy;
        const WideComplex value = shifted * prev1 - hopping_sq * prev2;
        const WideComplex slope = -prev1 + shifted * slope1 - hopping_sq * slope2;
        const Wide bound = (std::abs(d) + energy_abs) * bound1 + hopping_sq * bound2;

        prev2 = prev1;
        prev1 = value;
        slope2 = slope1;
        slope1 = slope;
        bound2 = bound1;
        bound1 = bound;

        int e = 0;
        std::frexp(bound1, &e);
        if (e > kRescaleExponent || e < -kRescaleExponent) {
            prev2 = scale_pow2(prev2, -e);
            prev1 = scale_pow2(prev1, -e);
            slope2 = scale_pow2(slope2, -e);
            slope1 = scale_pow2(slope1, -e);
            bound2 = std::ldexp(bound2, -e);
            bound1 = std::ldexp(bound1, -e);
            exponent += e;
        }
    }
    return {prev1, slope1, bound1, exponent};
}

// Derivatives p^(j)(E), j = 0..order, of p = det(H - E), sharing one
// power-of-two scale:
//   D^(j)_n = (d_n - E) D^(j)_{n-1} - j D^(j-1)_{n-1} - J^2 D^(j)_{n-2}.
std::vector<WideComplex> derivative_recurrence(WideComplex energy,
                                               const std::vector<WideComplex>& diagonal,
                                               Wide hopping_sq, int order) {
    const auto width = static_cast<std::size_t>(order + 1);
    std::vector<WideComplex> prev2(width, WideComplex(0)), prev1(width, WideComplex(0)), next(width);
    prev1[0] = 1;
    for (const WideComplex& d : diagonal) {
        const WideComplex shifted = d - energy;
        Wide peak = 0;
        for (std::size_t j = 0; j < width; ++j) {
            next[j] = shifted * prev1[j] - hopping_sq * prev2[j];
            if (j > 0) next[j] -= static_cast<Wide>(j) * prev1[j - 1];
            peak = std::max(peak, std::abs(next[j]));
        }
        prev2.swap(prev1);
        prev1.swap(next);
        int e = 0;
        std::frexp(peak, &e);
        if (e > kRescaleExponent || e < -kRescaleExponent) {
            for (std::size_t j = 0; j < width; ++j) {
                prev1[j] = scale_pow2(prev1[j], -e);
                prev2[j] = scale_pow2(prev2[j], -e);
            }
        }
    }
    return prev1;
}

// log2 |det(H - E)|.
Wide log2_abs_det(WideComplex energy, const std::vector<WideComplex>& diagonal, Wide hopping_sq) {
    const Recurrence r = run_recurrence(energy, diagonal, hopping_sq);
    return std::log2(std::abs(r.value)) + static_cast<Wide>(r.exponent);
}

std::vector<WideComplex> wide_diagonal(const ChainSpec& spec) {
    std::vector<WideComplex> d;
    d.reserve(static_cast<std::size_t>(spec.n_sites()));
    for (const Complex& v : spec.onsite_potentials()) d.emplace_back(v.real(), v.imag());
    return d;
}

struct PairCandidate {
    std::size_t index;
};

// Tridiagonal LU with partial pivoting (LAPACK gttrf/gttrs layout).
class TridiagonalSolver {
public:
    TridiagonalSolver(const ChainSpec& spec, Complex shift) {
        const auto n = static_cast<std::size_t>(spec.n_sites());
        const double floor = std::numeric_limits<double>::epsilon() *
                             (2.0 * spec.hopping() + spec.gamma());
        lower_.assign(n - 1, Complex(-spec.hopping()));
        upper_.assign(n - 1, Complex(-spec.hopping()));
        upper2_.assign(n > 2 ? n - 2 : 0, Complex(0.0));
        pivot_.assign(n, false);
        diag_ = spec.onsite_potentials();
        for (Complex& d : diag_) d -= shift;

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(diag_[i]) >= std::abs(lower_[i])) {
                if (std::abs(diag_[i]) == 0.0) diag_[i] = floor;
                const Complex fact = lower_[i] / diag_[i];
                lower_[i] = fact;
                diag_[i + 1] -= fact * upper_[i];
            } else {
                const Complex fact = diag_[i] / lower_[i];
                diag_[i] = lower_[i];
                lower_[i] = fact;
                const Complex temp = upper_[i];
                upper_[i] = diag_[i + 1];
                diag_[i + 1] = temp - fact * diag_[i + 1];
                if (i + 2 < n) {
                    upper2_[i] = upper_[i + 1];
                    upper_[i + 1] = -fact * upper_[i + 1];
                }
                pivot_[i] = true;
            }
        }
        for (Complex& d : diag_) {
            if (std::abs(d) == 0.0) d = floor;
        }
    }

    void solve(std::vector<Complex>& b) const {
        const std::size_t n = diag_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!pivot_[i]) {
                b[i + 1] -= lower_[i] * b[i];
            } else {
                const Complex temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - lower_[i] * b[i];
            }
        }
        b[n - 1] /= diag_[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - upper_[n - 2] * b[n - 1]) / diag_[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) {
            b[i] = (b[i] - upper_[i] * b[i + 1] - upper2_[i] * b[i + 2]) / diag_[i];
        }
    }

private:
    std::vector<Complex> lower_, diag_, upper_, upper2_;
    std::vector<bool> pivot_;
};

std::vector<Complex> apply_hamiltonian(const ChainSpec& spec, const std::vector<Complex>& psi) {
    const std::size_t n = psi.size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex v = spec.onsite(static_cast<int>(i) + 1) * psi[i];
        if (i > 0) v -= spec.hopping() * psi[i - 1];
        if (i + 1 < n) v -= spec.hopping() * psi[i + 1];
        out[i] = v;
    }
    return out;
}

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double residual_of(const ChainSpec& spec, const std::vector<Complex>& psi, Complex energy) {
    std::vector<Complex> r = apply_hamiltonian(spec, psi);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= energy * psi[i];
    return norm2(r) / norm2(psi);
}

// Least-squares amplitude c minimising sum |psi_n - c f_n|^2.
Complex fit_single(const std::vector<Complex>& values, const std::vector<Complex>& basis) {
    Complex num{0.0};
    double den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        num += std::conj(basis[i]) * values[i];
        den += std::norm(basis[i]);
    }
    return den > 0.0 ? num / den : Complex{0.0};
}

BetheCoefficients fit_bethe(const ChainSpec& spec, const std::vector<Complex>& psi, Complex k) {
    const int n = spec.n_sites();
    const int m = spec.impurity_site();
    const int mbar = spec.mirror_impurity_site();
    auto at = [&](int site) { return psi[static_cast<std::size_t>(site - 1)]; };

    BetheCoefficients c{};
    {
        std::vector<Complex> vals, basis;
        for (int s = 1; s <= m; ++s) {
            vals.push_back(at(s));
            basis.push_back(std::sin(k * static_cast<double>(s)));
        }
        c.a = fit_single(vals, basis);
    }
    {
        std::vector<Complex> vals, basis;
        for (int s = mbar; s <= n; ++s) {
            vals.push_back(at(s));
            basis.push_back(std::sin(k * static_cast<double>(n + 1 - s)));
        }
        c.b = fit_single(vals, basis);
    }
    {
        // Free propagation holds on m..mbar, so that window fixes P and Q.
        Eigen::Matrix2cd gram = Eigen::Matrix2cd::Zero();
        Eigen::Vector2cd rhs = Eigen::Vector2cd::Zero();
        for (int s = m; s <= mbar; ++s) {
            const Complex sn = std::sin(k * static_cast<double>(s));
            const Complex cs = std::cos(k * static_cast<double>(s));
            gram(0, 0) += std::conj(sn) * sn;
            gram(0, 1) += std::conj(sn) * cs;
            gram(1, 0) += std::conj(cs) * sn;
            gram(1, 1) += std::conj(cs) * cs;
            rhs(0) += std::conj(sn) * at(s);
            rhs(1) += std::conj(cs) * at(s);
        }
        const Eigen::Vector2cd pq = gram.completeOrthogonalDecomposition().solve(rhs);
        c.p = pq(0);
        c.q = pq(1);
    }
    return c;
}

} // namespace

Complex ScaledDeterminant::value() const {
    return {std::ldexp(mantissa.real(), static_cast<int>(exponent)),
            std::ldexp(mantissa.imag(), static_cast<int>(exponent))};
}

ScaledDeterminant char_poly_scaled(Complex energy, const ChainSpec& spec) {
    const Wide j = spec.hopping();
    const Recurrence r = run_recurrence(WideComplex(energy.real(), energy.imag()),
                                        wide_diagonal(spec), j * j);
    // Fold the mantissa back into [1, 2) magnitude range for reporting.
    int e = 0;
    const Wide mag = std::max(std::abs(r.value.real()), std::abs(r.value.imag()));
    if (mag != 0) std::frexp(mag, &e);
    ScaledDeterminant out;
    out.mantissa = Complex(static_cast<double>(std::ldexp(r.value.real(), -e)),
                           static_cast<double>(std::ldexp(r.value.imag(), -e)));
    out.exponent = r.exponent + e;
    return out;
}

Complex char_poly_eval(Complex energy, const ChainSpec& spec) {
    return char_poly_scaled(energy, spec).value();
}

namespace {

// Aberth-Ehrlich iteration from the given seeds. Returns false if the cap
// is hit; backward_error then holds |det| / bound per approximation and
// distance the last Newton correction, an estimate of the forward error.
bool aberth(std::vector<WideComplex>& z, const std::vector<WideComplex>& diagonal, Wide hopping,
            std::vector<double>& backward_error, std::vector<Wide>& distance) {
    const std::size_t n = z.size();
    const Wide hopping_sq = hopping * hopping;
    std::vector<bool> done(n, false);
    distance.assign(n, std::numeric_limits<Wide>::infinity());
    std::vector<Wide> last_step(n, std::numeric_limits<Wide>::infinity());
    backward_error.assign(n, std::numeric_limits<double>::infinity());
    const Wide cluster_scale = kStagnationScale * hopping;

    std::size_t remaining = n;
    for (int iter = 0; iter < kAberthIterationCap && remaining > 0; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const Recurrence r = run_recurrence(z[i], diagonal, hopping_sq);
            backward_error[i] = static_cast<double>(std::abs(r.value) / r.bound);
            if (r.value == WideComplex(0) || r.slope == WideComplex(0)) {
                distance[i] = 0;
                done[i] = true;
                --remaining;
                continue;
            }
            const WideComplex newton = r.value / r.slope;
            WideComplex repulsion{0};
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) repulsion += Wide(1) / (z[i] - z[j]);
            }
            const WideComplex step = newton / (Wide(1) - newton * repulsion);
            const Wide newton_size = std::abs(newton);
            const Wide step_size = std::abs(step);
            z[i] -= step;
            distance[i] = newton_size;
            // Converged to working precision, or stalled at the rounding
            // floor of a (nearly) multiple root. Both are judged on the
            // Newton correction: the Aberth step alone can be tiny far from
            // any root when two approximations crowd each other.
            const bool tiny = newton_size <= 4 * kWideEpsilon * std::max(std::abs(z[i]), hopping);
            const bool stalled = newton_size <= cluster_scale && step_size >= last_step[i];
            last_step[i] = step_size;
            if (tiny || stalled) {
                done[i] = true;
                --remaining;
            }
        }
    }
    return remaining == 0;
}

// Power sums sum E and sum E^2 must match tr H = 0 and tr H^2, up to the
// accumulated forward error. Catches two approximations parked on one
// root while another root goes unclaimed.
bool matches_traces(const std::vector<WideComplex>& z, const std::vector<Wide>& distance,
                    const ChainSpec& spec) {
    const Wide j = spec.hopping();
    const Wide g = spec.gamma();
    const Wide n = spec.n_sites();
    const Wide trace_sq = 2 * (n - 1) * j * j - 2 * g * g;
    const Wide scale = 2 * j + g;
    WideComplex s1{0}, s2{0};
    Wide slack1 = kTraceCheck * n * scale;
    Wide slack2 = kTraceCheck * n * scale * scale;
    for (std::size_t i = 0; i < z.size(); ++i) {
        s1 += z[i];
        s2 += z[i] * z[i];
        // A k-fold cluster member sits about k Newton corrections away.
        slack1 += kTraceSlack * distance[i];
        slack2 += kTraceSlack * distance[i] * 2 * std::abs(z[i]);
    }
    return std::abs(s1) <= slack1 && std::abs(s2 - trace_sq) <= slack2;
}


// Numerical multiplicity. The k approximations of a k-fold root scatter
// over a radius ~ eps^(1/k) and stall there, so their mean is not
// accurate either. A group of k approximations inside that radius whose
// mean is as close to a root as the members themselves (|p| no larger)
// is taken to be one k-fold root, located by Newton on p^(k-1), which has
// a simple zero there.
void refine_clusters(std::vector<WideComplex>& z, const std::vector<WideComplex>& diagonal,
                     Wide hopping, Wide scale) {
    const std::size_t n = z.size();
    const Wide hopping_sq = hopping * hopping;
    std::vector<bool> assigned(n, false);
    for (int k = std::min<int>(kMaxCluster, static_cast<int>(n)); k >= 2; --k) {
        const Wide radius = kClusterRadius * std::pow(kWideEpsilon, Wide(1) / k) * scale;
        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            std::vector<std::pair<Wide, std::size_t>> near;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || assigned[j]) continue;
                const Wide d = std::abs(z[j] - z[i]);
                if (d <= 2 * radius) near.emplace_back(d, j);
            }
            if (static_cast<int>(near.size()) < k - 1) continue;
            std::partial_sort(near.begin(), near.begin() + (k - 1), near.end());
            std::vector<std::size_t> members{i};
            for (int t = 0; t < k - 1; ++t) members.push_back(near[static_cast<std::size_t>(t)].second);

            WideComplex centre{0};
            for (std::size_t mbr : members) centre += z[mbr];
            centre /= static_cast<Wide>(k);
            bool tight = true;
            Wide member_level = -std::numeric_limits<Wide>::infinity();
            for (std::size_t mbr : members) {
                tight &= std::abs(z[mbr] - centre) <= radius;
                member_level = std::max(member_level, log2_abs_det(z[mbr], diagonal, hopping_sq));
            }
            if (!tight || log2_abs_det(centre, diagonal, hopping_sq) > member_level + 4) continue;

            WideComplex root = centre;
            for (int iter = 0; iter < kClusterNewtonSteps; ++iter) {
                const auto p = derivative_recurrence(root, diagonal, hopping_sq, k);
                if (p[static_cast<std::size_t>(k)] == WideComplex(0)) break;
                const WideComplex step = p[static_cast<std::size_t>(k - 1)] /
                                         p[static_cast<std::size_t>(k)];
                root -= step;
                if (std::abs(step) <= 4 * kWideEpsilon * std::max(std::abs(root), hopping)) break;
            }
            if (!(std::abs(root - centre) <= radius)) continue;
            for (std::size_t mbr : members) {
                z[mbr] = root;
                assigned[mbr] = true;
            }
        }
    }
}

} // namespace

Spectrum all_eigenvalues(const ChainSpec& spec, double tolerance) {
    const int n = spec.n_sites();
    const std::vector<WideComplex> diagonal = wide_diagonal(spec);
    const std::vector<double> hermitian = analytic_spectrum_hermitian(n, spec.hopping());

    std::vector<double> backward_error;
    std::vector<Wide> distance;
    std::vector<WideComplex> z;
    for (int attempt = 0; attempt < kSeedAttempts; ++attempt) {
        z.clear();
        if (attempt == 0) {
            // gamma = 0 levels, nudged off the real axis.
            for (int i = 0; i < n; ++i) {
                const double jitter = (i % 2 == 0 ? 1.0 : -1.0) * kSeedJitter * spec.hopping();
                z.emplace_back(hermitian[static_cast<std::size_t>(i)], jitter);
            }
        } else {
            // Fallback: a circle enclosing the spectrum, rotated per attempt.
            const Wide radius = 2 * spec.hopping() + spec.gamma();
            for (int i = 0; i < n; ++i) {
                const Wide angle = 2 * std::numbers::pi_v<Wide> * (i + 0.25L * attempt) / n + 0.4L;
                z.push_back(std::polar(radius, angle));
            }
        }
        if (aberth(z, diagonal, spec.hopping(), backward_error, distance) &&
            matches_traces(z, distance, spec)) {
            refine_clusters(z, diagonal, spec.hopping(), 2 * spec.hopping() + spec.gamma());
            std::vector<Complex> raw;
            raw.reserve(z.size());
            for (const WideComplex& v : z) {
                raw.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
            }
            return symmetrize_spectrum(std::move(raw), spec.hopping(), tolerance);
        }
    }
    throw ConvergenceError("eigenvalue iteration did not converge for N=" + std::to_string(n) +
                               ", m=" + std::to_string(spec.impurity_site()) +
                               ", gamma=" + std::to_string(spec.gamma()),
                           backward_error);
}

Spectrum all_eigenvalues_dense(const ChainSpec& spec, double tolerance) {
    using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = spec.n_sites();
    WideMatrix h = WideMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = WideComplex(-spec.hopping());
        h(i + 1, i) = WideComplex(-spec.hopping());
    }
    for (int i = 0; i < n; ++i) {
        const Complex d = spec.onsite(i + 1);
        h(i, i) = WideComplex(d.real(), d.imag());
    }
    Eigen::ComplexEigenSolver<WideMatrix> solver(h, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense eigensolver failed", {});
    }
    std::vector<Complex> raw;
    raw.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const WideComplex v = solver.eigenvalues()(i);
        raw.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    return symmetrize_spectrum(std::move(raw), spec.hopping(), tolerance);
}

Spectrum symmetrize_spectrum(std::vector<Complex> raw, double hopping, double tolerance) {
    const double real_cut = tolerance * 2.0 * hopping;

    std::vector<PairCandidate> upper, lower;
    std::vector<std::size_t> real_like;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].imag() > real_cut) {
            upper.push_back({i});
        } else if (raw[i].imag() < -real_cut) {
            lower.push_back({i});
        } else {
            real_like.push_back(i);
        }
    }

    // An unmatched excess on one side is demoted to real, smallest |Im| first.
    auto by_abs_imag = [&](const PairCandidate& x, const PairCandidate& y) {
        return std::abs(raw[x.index].imag()) > std::abs(raw[y.index].imag());
    };
    std::vector<PairCandidate>& larger = upper.size() > lower.size() ? upper : lower;
    const std::size_t target = std::min(upper.size(), lower.size());
    std::sort(larger.begin(), larger.end(), by_abs_imag);
    while (larger.size() > target) {
        real_like.push_back(larger.back().index);
        larger.pop_back();
    }

    // Greedy nearest-conjugate matching.
    std::vector<bool> taken(lower.size(), false);
    for (const PairCandidate& u : upper) {
        std::size_t best = lower.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (taken[j]) continue;
            const double dist = std::abs(raw[u.index] - std::conj(raw[lower[j].index]));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        taken[best] = true;
        const Complex mean = 0.5 * (raw[u.index] + std::conj(raw[lower[best].index]));
        raw[u.index] = mean;
        raw[lower[best].index] = std::conj(mean);
    }
    for (std::size_t i : real_like) raw[i] = Complex(raw[i].real(), 0.0);

    std::sort(raw.begin(), raw.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    Spectrum s;
    s.n_real = static_cast<int>(real_like.size());
    s.n_complex = static_cast<int>(raw.size()) - s.n_real;
    s.broken = s.n_complex > 0;
    s.degenerate.assign(raw.size(), false);
    const double window = kExceptionalPointWindow * 2.0 * hopping;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (raw[j].real() - raw[i].real() > window) break;
            if (std::abs(raw[j] - raw[i]) < window) {
                s.degenerate[i] = true;
                s.degenerate[j] = true;
            }
        }
    }
    s.eigenvalues = std::move(raw);
    return s;
}

Eigenvector eigenvector_for(const ChainSpec& spec, Complex energy) {
    const auto n = static_cast<std::size_t>(spec.n_sites());
    const double energy_scale = 2.0 * spec.hopping() + spec.gamma();

    const Spectrum spectrum = all_eigenvalues(spec);
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(spectrum.eigenvalues[i] - energy) <
            std::abs(spectrum.eigenvalues[nearest] - energy)) {
            nearest = i;
        }
    }
    const bool near_ep = spectrum.degenerate[nearest];

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    std::vector<Complex> psi(n);
    for (Complex& x : psi) x = Complex(unit(rng), unit(rng) - 1.0);

    const TridiagonalSolver solver(spec, energy);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kInverseIterations; ++it) {
        solver.solve(psi);
        const double scale = std::abs(*std::max_element(
            psi.begin(), psi.end(),
            [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); }));
        if (!(scale > 0.0) || !std::isfinite(scale)) break;
        for (Complex& x : psi) x /= scale;
        residual = residual_of(spec, psi, energy);
        if (residual <= std::numeric_limits<double>::epsilon() * energy_scale * 4.0) break;
    }

    const double bound = (near_ep ? kRelaxedResidualBound : kResidualBound) * energy_scale;
    if (!(residual <= bound)) {
        throw ValidationError("energy (" + std::to_string(energy.real()) + ", " +
                              std::to_string(energy.imag()) +
                              ") is not an eigenvalue: residual " + std::to_string(residual));
    }

    // Gauge: max amplitude 1, first significant site real positive.
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(psi[i]) > std::abs(psi[peak])) peak = i;
    }
    const double peak_abs = std::abs(psi[peak]);
    for (Complex& x : psi) x /= peak_abs;
    for (const Complex& x : psi) {
        if (std::abs(x) > 1e-12) {
            const Complex rotate = std::conj(x) / std::abs(x);
            for (Complex& y : psi) y *= rotate;
            break;
        }
    }

    Eigenvector out;
    out.energy = energy;
    out.residual = residual_of(spec, psi, energy);
    out.quasimomentum = std::acos(-energy / (2.0 * spec.hopping()));
    out.region_coeffs = fit_bethe(spec, psi, out.quasimomentum);
    out.near_exceptional_point = near_ep;
    out.amplitudes = std::move(psi);
    return out;
}

SpectrumClassification classify(const Spectrum& spectrum) {
    SpectrumClassification c;
    c.n_real = spectrum.n_real;
    c.n_complex = spectrum.n_complex;
    const auto total = static_cast<double>(spectrum.eigenvalues.size());
    c.degree_of_breaking = total > 0 ? spectrum.n_complex / total : 0.0;
    for (const Complex& e : spectrum.eigenvalues) c.max_imag = std::max(c.max_imag, std::abs(e.imag()));
    return c;
}

} // namespace ptchain
