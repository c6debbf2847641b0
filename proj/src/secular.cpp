#include "ptchain/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptchain/errors.hpp"

namespace ptchain {

namespace {

template <class T>
T secular_value(T k, const ChainSpec& spec) {
    const int n = spec.n_sites();
    const int m = spec.impurity_site();
    const T g = spec.gamma_over_hopping();
    const T g2 = g * g;

    const T s_m1 = std::sin(k * (m + 1));
    const T s_m = std::sin(k * m);
    return (s_m1 * s_m1 + g2 * s_m * s_m) * std::sin(k * (n - 2 * m + 1)) +
           s_m * s_m * std::sin(k * (n - 2 * m - 1)) -
           T(2) * s_m * s_m1 * std::sin(k * (n - 2 * m));
}

template <class T>
T secular_slope(T k, const ChainSpec& spec) {
    const int n = spec.n_sites();
    const int m = spec.impurity_site();
    const T g = spec.gamma_over_hopping();
    const T g2 = g * g;

    const T a = std::sin(k * (m + 1));
    const T da = (m + 1) * std::cos(k * (m + 1));
    const T b = std::sin(k * m);
    const T db = m * std::cos(k * m);
    const T c = std::sin(k * (n - 2 * m + 1));
    const T dc = (n - 2 * m + 1) * std::cos(k * (n - 2 * m + 1));
    const T d = std::sin(k * (n - 2 * m - 1));
    const T dd = (n - 2 * m - 1) * std::cos(k * (n - 2 * m - 1));
    const T e = std::sin(k * (n - 2 * m));
    const T de = (n - 2 * m) * std::cos(k * (n - 2 * m));

    return (T(2) * a * da + T(2) * g2 * b * db) * c + (a * a + g2 * b * b) * dc +
           T(2) * b * db * d + b * b * dd - T(2) * (db * a * e + b * da * e + b * a * de);
}


constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kMaxSubdivisionDepth = 40;

// The scan runs in long double: near a merging pair the dip of M sits
// only ~(Im k)^2 above zero, below double resolution.
using Wide = long double;

Wide wide_value(Wide k, const ChainSpec& spec) { return secular_value<Wide>(k, spec); }
Wide wide_slope(Wide k, const ChainSpec& spec) { return secular_slope<Wide>(k, spec); }

struct Sample {
    double k;
    Wide value;
    Wide slope;
};

bool positive(Wide x) { return x >= 0; }

class RootScanner {
public:
    RootScanner(const ChainSpec& spec, Wide threshold) : spec_(spec), threshold_(threshold) {}

    Sample sample(double k) const {
        return {k, wide_value(k, spec_), wide_slope(k, spec_)};
    }

    // Examines [a, b]; appends roots in ascending order.
    void scan_cell(const Sample& a, const Sample& b, int depth) {
        const bool value_flips = positive(a.value) != positive(b.value);
        const bool slope_flips = positive(a.slope) != positive(b.slope);

        if (value_flips) {
            if (slope_flips && depth < kMaxSubdivisionDepth) {
                // One or three roots; split until the extremum is isolated.
                const Sample mid = sample(a.k + 0.5 * (b.k - a.k));
                scan_cell(a, mid, depth + 1);
                scan_cell(mid, b, depth + 1);
                return;
            }
            add_simple(a, b);
            return;
        }

        // |M| falling at a and rising at b: a dip toward zero inside.
        if (slope_flips && a.value * a.slope < 0 && b.value * b.slope > 0) {
            const Sample dip = sample(locate_extremum(a, b));
            if (positive(dip.value) != positive(a.value)) {
                add_simple(a, dip);
                add_simple(dip, b);
            } else if (std::abs(dip.value) <= threshold_) {
                roots_.push_back(dip.k);
                multiplicities_.push_back(2);
            }
        }
    }

    // Root in (a, b) whose right end is only known through its sign.
    void add_simple_with_limit(const Sample& a, double right_k, bool right_positive) {
        if (positive(a.value) == right_positive) return;
        double lo = a.k;
        double hi = right_k;
        const bool lo_positive = positive(a.value);
        for (;;) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            if (positive(wide_value(mid, spec_)) == lo_positive) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots_.push_back(polish(0.5 * (lo + hi), a.k, right_k));
        multiplicities_.push_back(1);
    }

    std::vector<double>& roots() { return roots_; }
    std::vector<int>& multiplicities() { return multiplicities_; }

private:
    void add_simple(const Sample& a, const Sample& b) {
        double lo = a.k;
        double hi = b.k;
        const bool lo_positive = positive(a.value);
        for (;;) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            if (positive(wide_value(mid, spec_)) == lo_positive) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots_.push_back(polish(0.5 * (lo + hi), a.k, b.k));
        multiplicities_.push_back(1);
    }

    // One safeguarded Newton step, kept only if it stays inside the
    // bracket and lowers |M|.
    double polish(double k, double lo, double hi) const {
        const Wide value = wide_value(k, spec_);
        const Wide slope = wide_slope(k, spec_);
        if (slope == 0) return k;
        const auto next = static_cast<double>(k - value / slope);
        if (next < lo || next > hi) return k;
        return std::abs(wide_value(next, spec_)) < std::abs(value) ? next : k;
    }

    double locate_extremum(const Sample& a, const Sample& b) const {
        double lo = a.k;
        double hi = b.k;
        const bool lo_positive = positive(a.slope);
        for (;;) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            if (positive(wide_slope(mid, spec_)) == lo_positive) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    const ChainSpec& spec_;
    Wide threshold_;
    std::vector<double> roots_;
    std::vector<int> multiplicities_;
};

} // namespace

double eval_secular(double k, const ChainSpec& spec) { return secular_value(k, spec); }

double eval_secular_derivative(double k, const ChainSpec& spec) { return secular_slope(k, spec); }

double eval_secular_nearest(double k, int n_sites, double gamma, double hopping) {
    if (n_sites < 2 || n_sites % 2 != 0) {
        throw ValidationError("nearest-neighbour reduction needs even N >= 2, got N=" +
                              std::to_string(n_sites));
    }
    const double j2 = hopping * hopping;
    const double outer = std::sin(k * (n_sites / 2 + 1));
    const double inner = std::sin(k * n_sites / 2);
    return j2 * outer * outer - (j2 - gamma * gamma) * inner * inner;
}

double eval_secular_next_nearest(double k, int n_sites, double gamma, double hopping) {
    if (n_sites < 3 || n_sites % 2 == 0) {
        throw ValidationError("next-nearest-neighbour reduction needs odd N >= 3, got N=" +
                              std::to_string(n_sites));
    }
    const int center = (n_sites + 1) / 2;
    const double g = gamma / hopping;
    const double s0 = std::sin(k * center);
    const double s1 = std::sin(k * (center - 1));
    return std::cos(k) * (s0 * s0 + g * g * s1 * s1) - s0 * s1;
}

double default_root_tolerance(const ChainSpec& spec) {
    const double g = spec.gamma_over_hopping();
    return 1e-13 * std::max(1.0, g * g);
}

RootSet find_real_roots(const ChainSpec& spec, int grid_points, double tolerance) {
    const int n = spec.n_sites();
    if (grid_points < 8 * n) {
        throw ValidationError("grid_points=" + std::to_string(grid_points) +
                              " below the minimum 8N=" + std::to_string(8 * n));
    }
    if (!(tolerance > 0.0)) {
        throw ValidationError("root tolerance must be positive");
    }

    const int cells = grid_points + grid_points % 2;
    const int half = cells / 2;
    const double step = kPi / cells;

    // Grid points (i + 1/2) * step never land on pi/2.
    std::vector<Sample> grid;
    grid.reserve(static_cast<std::size_t>(half));
    Wide scale = 0;
    for (int i = 0; i < half; ++i) {
        const double k = (i + 0.5) * step;
        grid.push_back({k, wide_value(k, spec), wide_slope(k, spec)});
        scale = std::max(scale, std::abs(grid.back().value));
    }

    RootScanner scanner(spec, tolerance * scale);
    for (int i = 0; i + 1 < half; ++i) {
        scanner.scan_cell(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(i + 1)], 0);
    }

    // The last partial cell [k_last, pi/2].
    const Sample& last = grid.back();
    bool center_root = false;
    int center_multiplicity = 0;
    if (n % 2 == 1) {
        // pi/2 is always a root for odd N; M ~ M'(pi/2) (k - pi/2) left of it.
        // M is odd about pi/2, so when M' vanishes there as well the root is
        // triple and the cubic term sets the sign instead.
        center_root = true;
        const Wide center = std::numbers::pi_v<Wide> / 2;
        const Wide center_slope = wide_slope(center, spec);
        if (std::abs(center_slope) * step <= tolerance * scale) {
            center_multiplicity = 3;
            const Wide h = step / 2;
            const Wide third = 2 * (wide_slope(center - h, spec) - center_slope) / (h * h);
            if (third != 0) scanner.add_simple_with_limit(last, kHalfPi, third < 0);
        } else {
            center_multiplicity = 1;
            scanner.add_simple_with_limit(last, kHalfPi, center_slope < 0);
        }
    } else {
        // M is even about pi/2, so pi/2 is an extremum.
        const Wide center_value = wide_value(std::numbers::pi_v<Wide> / 2, spec);
        if (center_value != 0 && positive(center_value) != positive(last.value)) {
            scanner.add_simple_with_limit(last, kHalfPi, positive(center_value));
        } else if (std::abs(center_value) <= tolerance * scale) {
            center_root = true;
            center_multiplicity = 2;
        }
    }

    std::vector<double>& left = scanner.roots();
    std::vector<int>& left_mult = scanner.multiplicities();

    RootSet result;
    const std::size_t total = 2 * left.size() + (center_root ? 1 : 0);
    result.roots.reserve(total);
    result.multiplicities.reserve(total);
    for (std::size_t i = 0; i < left.size(); ++i) {
        result.roots.push_back(left[i]);
        result.multiplicities.push_back(left_mult[i]);
    }
    if (center_root) {
        result.roots.push_back(kHalfPi);
        result.multiplicities.push_back(center_multiplicity);
    }
    for (std::size_t i = left.size(); i-- > 0;) {
        result.roots.push_back(kPi - left[i]);
        result.multiplicities.push_back(left_mult[i]);
    }
    for (double k : result.roots) result.residuals.push_back(std::abs(eval_secular(k, spec)));
    for (int mult : result.multiplicities) result.total_count += mult;

    if (result.total_count > n || (n - result.total_count) % 2 != 0) {
        throw GridTooCoarseError("found " + std::to_string(result.total_count) +
                                 " real quasimomenta for N=" + std::to_string(n) +
                                 "; count cannot be certified, increase grid_points");
    }
    return result;
}

RootSet find_real_roots(const ChainSpec& spec) {
    return find_real_roots(spec, 16 * spec.n_sites(), default_root_tolerance(spec));
}

} // namespace ptchain
