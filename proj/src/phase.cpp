#include "ptchain/phase.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "parallel.hpp"
#include "ptchain/errors.hpp"
#include "ptchain/secular.hpp"

namespace ptchain {

namespace {

constexpr int kDenseLimit = 64;
// Eigenvalues near a merge are only good to ~sqrt(eps) and the new pair's
// imaginary part grows like sqrt(gamma - gamma_PT) with a prefactor that
// shrinks with N. Certification therefore checks the bracket widened by
// this margin (units of J) with a tighter classification cut.
constexpr double kCertifyMargin = 1e-6;
constexpr double kCertifyClassification = 1e-9;

bool spectrum_is_real(const ChainSpec& spec, PhasePredicate predicate) {
    if (predicate == PhasePredicate::Dense) {
        return all_eigenvalues_dense(spec).n_real == spec.n_sites();
    }
    return find_real_roots(spec).total_count == spec.n_sites();
}

Spectrum certifying_spectrum(const ChainSpec& spec, PhasePredicate predicate) {
    return predicate == PhasePredicate::Dense ? all_eigenvalues_dense(spec, kCertifyClassification)
                                              : all_eigenvalues(spec, kCertifyClassification);
}

} // namespace

CriticalResult critical_gamma(int n_sites, int impurity_site, double hopping,
                              const CriticalOptions& options) {
    const ChainSpec base(n_sites, impurity_site, 0.0, hopping);
    if (!(options.tolerance > 0.0) || !(options.gamma_cap > 0.0) || options.coarse_steps < 1) {
        throw ValidationError("critical search needs positive tolerance, cap and step count");
    }
    if (options.predicate == PhasePredicate::Dense && n_sites > kDenseLimit) {
        throw ValidationError("dense predicate limited to N <= " + std::to_string(kDenseLimit));
    }
    const double tolerance = options.tolerance * hopping;
    const double cap = options.gamma_cap * hopping;
    auto is_real = [&](double gamma) {
        return spectrum_is_real(base.with_gamma(gamma), options.predicate);
    };

    if (!is_real(0.0)) {
        throw NumericalError("spectrum reported broken at gamma = 0 for N=" +
                             std::to_string(n_sites) + ", m=" + std::to_string(impurity_site));
    }

    double lo = 0.0;
    double hi = -1.0;
    for (int i = 1; i <= options.coarse_steps; ++i) {
        const double gamma = cap * i / options.coarse_steps;
        if (!is_real(gamma)) {
            hi = gamma;
            break;
        }
        lo = gamma;
    }
    if (hi < 0.0) {
        throw DomainError("no transition below cap gamma=" + std::to_string(options.gamma_cap) +
                          "J for N=" + std::to_string(n_sites) + ", m=" +
                          std::to_string(impurity_site) + "; raise the cap");
    }

    while (hi - lo > tolerance) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (is_real(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    const double margin = kCertifyMargin * hopping;
    const Spectrum below =
        certifying_spectrum(base.with_gamma(std::max(0.0, lo - margin)), options.predicate);
    const Spectrum above = certifying_spectrum(base.with_gamma(hi + margin), options.predicate);
    if (below.n_real != n_sites || above.n_real == n_sites) {
        throw NumericalError("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "] failed eigenvalue certification for N=" + std::to_string(n_sites) +
                             ", m=" + std::to_string(impurity_site) + " (" +
                             std::to_string(below.n_real) + " and " +
                             std::to_string(above.n_real) + " real)");
    }

    CriticalResult result;
    result.gamma_low = lo;
    result.gamma_high = hi;
    result.gamma_pt = lo + 0.5 * (hi - lo);
    result.tolerance = tolerance;
    result.n_complex_just_above = above.n_complex;
    return result;
}

int broken_count(int n_sites, int impurity_site, double gamma, double hopping,
                 double classification_tolerance) {
    const ChainSpec spec(n_sites, impurity_site, gamma, hopping);
    return all_eigenvalues(spec, classification_tolerance).n_complex;
}

double saturation_gamma(int n_sites, double hopping) {
    return hopping * std::max(2.0, 2.0 * (n_sites + 1) / (3.0 * std::numbers::pi));
}

OddClosestThreshold odd_closest_threshold_detail(int n_sites, double hopping) {
    if (n_sites < 5 || n_sites % 2 == 0) {
        throw ValidationError("odd closest-impurity threshold needs odd N >= 5, got N=" +
                              std::to_string(n_sites));
    }
    const int center = (n_sites + 1) / 2;
    // (gamma/J)^2 that puts k on the reduced secular curve.
    auto strength_sq = [center](double k) {
        const double s0 = std::sin(k * center);
        const double s1 = std::sin(k * (center - 1));
        return (s0 * s1 / std::cos(k) - s0 * s0) / (s1 * s1);
    };

    const double left = std::numbers::pi / (n_sites + 1);
    const double right = 2.0 * left;
    constexpr int kSamples = 2048;
    int best = 1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < kSamples; ++i) {
        const double value = strength_sq(left + (right - left) * i / kSamples);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    const double lo = left + (right - left) * (best - 1) / kSamples;
    const double hi = left + (right - left) * (best + 1) / kSamples;
    const auto [k_d, neg_max] = boost::math::tools::brent_find_minima(
        [&](double k) { return -strength_sq(k); }, lo, hi, std::numeric_limits<double>::digits);

    OddClosestThreshold out;
    out.merge_quasimomentum = k_d;
    out.closed_form = hopping / (2.0 * std::cos(k_d));
    out.merge_strength = hopping * std::sqrt(-neg_max);
    return out;
}

double odd_closest_threshold(int n_sites, double hopping) {
    return odd_closest_threshold_detail(n_sites, hopping).closed_form;
}

int approx_real_root_count(int n_sites, double mu) {
    if (!(mu > 0.0 && mu < 0.5)) {
        throw ValidationError("large-N estimate needs 0 < mu < 1/2; it does not hold as mu -> 0 "
                              "(impurities at the ends) or mu -> 1/2 (closest impurities)");
    }
    const double count = n_sites * (1.0 - 2.0 * mu);
    if (count < 1.0) {
        throw ValidationError("N(1 - 2mu) < 1: no real quasimomenta predicted");
    }
    return static_cast<int>(std::lround(count));
}

std::vector<PhasePoint> sweep_phase_diagram(int n_sites, const std::vector<int>& impurity_sites,
                                            double hopping, const CriticalOptions& options) {
    std::vector<PhasePoint> points(impurity_sites.size());
    detail::parallel_for(impurity_sites.size(), [&](std::size_t i) {
        PhasePoint& p = points[i];
        p.n_sites = n_sites;
        p.impurity_site = impurity_sites[i];
        p.mu = static_cast<double>(p.impurity_site) / n_sites;
        try {
            p.gamma_pt = critical_gamma(n_sites, p.impurity_site, hopping, options).gamma_pt;
            p.n_complex_saturated =
                broken_count(n_sites, p.impurity_site, saturation_gamma(n_sites, hopping), hopping);
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    });
    return points;
}

ScalingFit fit_fragility_scaling(double mu, const std::vector<int>& sample_sizes, double hopping,
                                 const CriticalOptions& options) {
    if (sample_sizes.size() < 4) {
        throw ValidationError("scaling fit needs at least 4 chain sizes");
    }
    std::vector<int> sites;
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        const int n = sample_sizes[i];
        if (i > 0 && n <= sample_sizes[i - 1]) {
            throw ValidationError("chain sizes must be strictly increasing");
        }
        const double m = mu * n;
        const long rounded = std::lround(m);
        if (std::abs(m - static_cast<double>(rounded)) > 1e-9) {
            throw ValidationError("mu*N is not an integer for N=" + std::to_string(n));
        }
        sites.push_back(static_cast<int>(rounded));
    }

    std::vector<double> gammas(sample_sizes.size());
    detail::parallel_for(sample_sizes.size(), [&](std::size_t i) {
        gammas[i] = critical_gamma(sample_sizes[i], sites[i], hopping, options).gamma_pt / hopping;
    });

    const auto count = static_cast<double>(sample_sizes.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        const double x = std::log(static_cast<double>(sample_sizes[i]));
        const double y = std::log(gammas[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ScalingFit fit;
    fit.mu = mu;
    fit.sample_sizes = sample_sizes;
    fit.exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.log_prefactor = (sy - fit.exponent * sx) / count;
    double ss = 0.0;
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        const double r = std::log(gammas[i]) -
                         (fit.log_prefactor + fit.exponent * std::log(double(sample_sizes[i])));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / count);
    fit.gamma_pts = std::move(gammas);
    return fit;
}

} // namespace ptchain
