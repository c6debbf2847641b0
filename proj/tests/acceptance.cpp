// Acceptance run: one [PASS]/[FAIL] line per criterion.
//
//   acceptance [--expect-fail i,j,...]
//
// Exit status is 0 when the failing set equals the expected-fail set, so a
// criterion known to be out of reach keeps printing FAIL without hiding
// regressions elsewhere (an unexpected pass also exits non-zero).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracle.hpp"
#include "ptchain/phase.hpp"
#include "ptchain/secular.hpp"
#include "ptchain/spectral.hpp"
#include "ptchain/wavefn.hpp"

using namespace ptchain;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

std::string fmt(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

bool has_zero_mode(const Spectrum& s) {
    return std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(), [](Complex e) {
        return e.imag() == 0.0 && std::abs(e.real()) <= 1e-8;
    });
}

// 1. Even N, closest impurities.
void even_closest(Outcome& o) {
    for (int n : {8, 20, 50, 100}) {
        const double g = critical_gamma(n, n / 2).gamma_pt;
        o.check(std::abs(g - 1.0) <= 1e-6, "N=" + std::to_string(n) + " gamma_PT=" + fmt(g));

        const Spectrum s = all_eigenvalues(ChainSpec(n, n / 2, 1.0));
        bool doubles = s.n_real == n;
        double worst = 0.0;
        for (int i = 0; i < n / 2 && doubles; ++i) {
            const double expected = -2.0 * std::cos(2.0 * (i + 1) * kPi / (n + 2));
            for (int c = 0; c < 2; ++c) {
                worst = std::max(worst, std::abs(s.eigenvalues[static_cast<std::size_t>(2 * i + c)] -
                                                 Complex(expected, 0.0)));
            }
        }
        o.check(doubles && worst <= 1e-8,
                "N=" + std::to_string(n) + " doublets off by " + fmt(worst, 3));

        const int broken = broken_count(n, n / 2, 1.001);
        o.check(broken == n, "N=" + std::to_string(n) + " broken_count(1.001J)=" +
                                 std::to_string(broken));
    }
    o.detail << (o.pass ? "gamma_PT = J for N in {8,20,50,100}, N/2 doublets, fully broken at 1.001J"
                        : "");
}

// 2. Odd N, closest impurities.
void odd_closest(Outcome& o) {
    std::vector<double> values;
    std::ostringstream summary;
    for (int n : {13, 21, 51, 101, 501}) {
        const int m = (n - 1) / 2;
        const double g = critical_gamma(n, m).gamma_pt;
        values.push_back(g);
        summary << " N=" << n << ":" << fmt(g, 7);

        // Sweep past the threshold: sequential breaking, zero mode kept.
        const double sat = saturation_gamma(n);
        // Near saturation the last pairs' imaginary parts at large N sit
        // below the default cut; classify with a tighter one there.
        const double cut = n > 101 ? 1e-12 : kDefaultClassificationTolerance;
        std::set<int> intermediate;
        bool zero_mode = true;
        const int steps = n > 101 ? 24 : 60;
        for (int i = 0; i <= steps; ++i) {
            const double gamma = g + (sat - g) * std::pow(static_cast<double>(i) / steps, 2.0);
            const Spectrum s = all_eigenvalues(ChainSpec(n, m, gamma), cut);
            zero_mode &= has_zero_mode(s);
            if (s.n_complex > 0 && s.n_complex < n - 1) intermediate.insert(s.n_complex);
        }
        const Spectrum at_sat = all_eigenvalues(ChainSpec(n, m, sat), cut);
        std::ostringstream counts;
        for (int c : intermediate) counts << (c == *intermediate.begin() ? "" : ",") << c;
        summary << " {" << counts.str() << "}";
        // Every merge turns four eigenvalues complex, so N=13 passes through
        // only 4 and 8 before saturating at 12.
        o.check(static_cast<int>(intermediate.size()) >= 3,
                "N=" + std::to_string(n) + " has only " + std::to_string(intermediate.size()) +
                    " intermediate broken counts {" + counts.str() + "}");
        o.check(at_sat.n_complex == n - 1, "N=" + std::to_string(n) + " saturates at " +
                                               std::to_string(at_sat.n_complex));
        o.check(zero_mode, "N=" + std::to_string(n) + " lost the E=0 mode");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        o.check(values[i] < values[i - 1] && values[i] > 0.5, "gamma_PT not decreasing toward J/2");
    }
    o.check(std::abs(values.back() - 0.5) <= 2e-3, "N=501 gamma_PT=" + fmt(values.back()));
    if (!o.pass) o.detail << " | ";
    o.detail << "gamma_PT and intermediate counts:" << summary.str();
}

// 3. Single-site-from-the-end impurities, odd N.
void end_impurity(Outcome& o) {
    std::ostringstream info;
    for (int n : {13, 21, 51}) {
        const double g = critical_gamma(n, 1).gamma_pt;
        const double target = std::sqrt(1.0 + 1.0 / n);
        o.check(std::abs(g - target) <= 1e-6, "N=" + std::to_string(n) + " gamma_PT=" + fmt(g) +
                                                  " vs sqrt(1+1/N)=" + fmt(target));
        info << " N=" << n << " sqrt(1+2/(N-1))=" << fmt(std::sqrt(1.0 + 2.0 / (n - 1)));
    }
    if (o.pass) {
        o.detail << "gamma_PT = J sqrt(1+1/N)";
    } else {
        o.detail << " [for reference:" << info.str() << "]";
    }
}

// 4. Fragility scaling.
void scaling(Outcome& o) {
    const ScalingFit quarter = fit_fragility_scaling(0.25, {16, 32, 64, 128});
    const ScalingFit half = fit_fragility_scaling(0.5, {16, 32, 64, 128});
    o.check(std::abs(quarter.exponent + 1.0) <= 0.15, "mu=0.25 exponent " + fmt(quarter.exponent));
    o.check(std::abs(half.exponent) <= 0.05, "mu=0.5 exponent " + fmt(half.exponent));
    if (o.pass) {
        o.detail << "exponent mu=0.25: " << fmt(quarter.exponent, 4)
                 << ", mu=0.5: " << fmt(half.exponent, 3);
    }
}

// 5. Degree of breaking.
void degree(Outcome& o) {
    for (auto [n, m] : {std::pair{20, 4}, {20, 8}, {40, 10}}) {
        const std::string tag = "(" + std::to_string(n) + "," + std::to_string(m) + ")";
        const Spectrum s = all_eigenvalues(ChainSpec(n, m, 2.0));
        o.check(s.n_complex == 2 * m, tag + " broken at 2J: " + std::to_string(s.n_complex));
        const CriticalResult r = critical_gamma(n, m);
        o.check(r.n_complex_just_above == 4,
                tag + " just above: " + std::to_string(r.n_complex_just_above));
        const double mu = static_cast<double>(m) / n;
        o.check(std::abs(classify(s).degree_of_breaking - 2.0 * mu) <= 1.0 / n,
                tag + " degree " + fmt(classify(s).degree_of_breaking));
    }
    if (o.pass) o.detail << "2m broken at 2J, 4 just above gamma_PT, degree = 2mu";
}

// 6. Polynomial path vs dense brute force.
void oracle_equivalence(Outcome& o) {
    double worst_all = 0.0, worst_real = 0.0;
    int cases = 0;
    for (int n = 2; n <= 12; ++n) {
        for (int m = 1; m <= n / 2; ++m) {
            for (int step = 0; step <= 20; ++step) {
                const double gamma = 0.1 * step;
                const ChainSpec spec(n, m, gamma);
                const Spectrum s = all_eigenvalues(spec);
                worst_all = std::max(worst_all, oracle::multiset_distance(
                                                    s.eigenvalues, oracle::eigenvalues(n, m, gamma)));
                const RootSet r = find_real_roots(spec);
                std::vector<Complex> reals, from_roots;
                for (Complex e : s.eigenvalues) {
                    if (e.imag() == 0.0) reals.push_back(e);
                }
                for (std::size_t i = 0; i < r.roots.size(); ++i) {
                    for (int c = 0; c < r.multiplicities[i]; ++c) {
                        from_roots.emplace_back(-2.0 * std::cos(r.roots[i]), 0.0);
                    }
                }
                worst_real = std::max(worst_real, oracle::multiset_distance(reals, from_roots));
                ++cases;
            }
        }
    }
    o.check(worst_all <= 1e-8, "eigenvalue mismatch " + fmt(worst_all, 3));
    o.check(worst_real <= 1e-8, "real eigenvalue vs root mismatch " + fmt(worst_real, 3));
    if (o.pass) {
        o.detail << cases << " cases, max deviation " << fmt(worst_all, 2) << " (all), "
                 << fmt(worst_real, 2) << " (real vs roots)";
    }
}

// 7. Invariants.
void invariants(Outcome& o) {
    std::mt19937 rng(97);
    int spectra = 0;
    for (int n : {7, 16, 33, 64, 128}) {
        for (int m : {1, n / 4, n / 2}) {
            for (double gamma : {0.0, 0.05, 0.4, 1.0, 2.5}) {
                const Spectrum s = all_eigenvalues(ChainSpec(n, m, gamma));
                Complex sum{0.0, 0.0};
                for (Complex e : s.eigenvalues) {
                    sum += e;
                    const bool closed = std::find(s.eigenvalues.begin(), s.eigenvalues.end(),
                                                  std::conj(e)) != s.eigenvalues.end();
                    o.check(closed, "conjugate missing");
                    if (!s.broken) o.check(std::abs(e.real()) <= 2.0, "outside band");
                }
                o.check(std::abs(sum) <= 1e-8 * n, "trace " + fmt(std::abs(sum), 3));
                ++spectra;
            }
        }
    }
    std::uniform_real_distribution<double> kd(0.0, kPi), gd(0.0, 3.0);
    std::uniform_int_distribution<int> nd(2, 200);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int n = nd(rng);
        const int m = std::uniform_int_distribution<int>(1, n / 2)(rng);
        const ChainSpec spec(n, m, gd(rng));
        const double k = kd(rng);
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(eval_secular(kPi - k, spec) - sign * eval_secular(k, spec)));
    }
    o.check(worst <= 1e-12, "M(pi-k) symmetry off by " + fmt(worst, 3));
    if (o.pass) {
        o.detail << spectra << " spectra closed, traceless, banded; symmetry max error "
                 << fmt(worst, 2) << " over 1e4 samples";
    }
}

// 8. Closest-impurity eigenstate at and beyond the exceptional point.
void wavefunction(Outcome& o) {
    const int n = 20;
    auto ground = [&](double gamma) {
        const ChainSpec spec(n, 10, gamma);
        const Spectrum s = all_eigenvalues(spec);
        return eigenvector_for(spec, s.eigenvalues[ground_state_index(s)]);
    };
    const Eigenvector at = ground(1.0);
    o.check(pt_symmetry_check(at, 1e-8), "gamma=J ground state not PT-even");
    const auto p = amplitude_phase(at);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double expected = i < n / 2 ? 0.0 : kPi / 2;
        worst = std::max(worst, std::abs(p[static_cast<std::size_t>(i)].phase - expected));
    }
    o.check(worst <= 1e-8, "phase profile off by " + fmt(worst, 3));

    const Eigenvector past = ground(1.01);
    o.check(!pt_symmetry_check(past, 1e-8), "gamma=1.01J ground state still PT-even");
    const auto q = amplitude_phase(past);
    auto spread = [&](int from, int to) {
        double lo = 1e300, hi = -1e300;
        for (int i = from; i < to; ++i) {
            lo = std::min(lo, q[static_cast<std::size_t>(i)].phase);
            hi = std::max(hi, q[static_cast<std::size_t>(i)].phase);
        }
        return hi - lo;
    };
    const double left = spread(0, n / 2), right = spread(n / 2, n);
    o.check(left > 1e-3 && right > 1e-3, "gamma=1.01J phase flat on a half");
    if (o.pass) {
        o.detail << "step pi/2 to " << fmt(worst, 2) << "; at 1.01J phase spread " << fmt(left, 3)
                 << " / " << fmt(right, 3) << " rad per half";
    }
}

// 9. Root trajectories from the CLI, N = 20.
struct MergeInfo {
    double gamma = -1.0;  // first grid gamma with fewer than N real roots
    std::vector<double> lost; // k/pi values present just before and gone after
    std::vector<double> before; // all k/pi just before, ascending
};

MergeInfo first_merge(int m) {
    std::ostringstream out, err;
    const int code = cli::run({"roots", "--n", "20", "--m", std::to_string(m), "--gamma-min", "0",
                               "--gamma-max", "0.6", "--gamma-steps", "601"},
                              out, err);
    MergeInfo info;
    if (code != 0) return info;
    std::map<double, std::vector<std::pair<double, int>>> rows;
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string g, k, mult;
        std::getline(ls, g, ',');
        std::getline(ls, k, ',');
        std::getline(ls, mult, ',');
        rows[std::stod(g)].emplace_back(std::stod(k), std::stoi(mult));
    }
    const std::vector<std::pair<double, int>>* previous = nullptr;
    for (const auto& [gamma, roots] : rows) {
        int count = 0;
        for (const auto& r : roots) count += r.second;
        if (count < 20) {
            info.gamma = gamma;
            if (previous) {
                for (const auto& r : *previous) info.before.push_back(r.first);
                for (const auto& [k, mult] : *previous) {
                    const bool kept = std::any_of(roots.begin(), roots.end(), [&](const auto& r) {
                        return std::abs(r.first - k) < 0.01;
                    });
                    if (!kept) info.lost.push_back(k);
                }
            }
            return info;
        }
        previous = &roots;
    }
    return info;
}

void root_trajectories(Outcome& o) {
    const MergeInfo m4 = first_merge(4);
    const MergeInfo m8 = first_merge(8);
    o.check(m4.gamma > 0 && m8.gamma > 0, "no merge found on the grid");
    o.check(m4.gamma > m8.gamma, "merge gamma m=4 " + fmt(m4.gamma) + " <= m=8 " + fmt(m8.gamma));
    // The first pairs to merge should be the lowest two modes, k1 ~ pi/21
    // and k2 ~ 2pi/21, together with their mirrors near the zone boundary.
    // So the lost roots must include the smallest and largest roots present
    // just before the merge.
    std::ostringstream where;
    for (const MergeInfo* info : {&m4, &m8}) {
        const bool edges =
            !info->before.empty() &&
            std::count(info->lost.begin(), info->lost.end(), info->before.front()) == 1 &&
            std::count(info->lost.begin(), info->lost.end(), info->before.back()) == 1;
        std::ostringstream here;
        for (double k : info->lost) {
            const auto pos = std::find(info->before.begin(), info->before.end(), k);
            here << " " << fmt(k, 4) << "(k" << (pos - info->before.begin()) + 1 << ")";
        }
        where << " m=" << (info == &m4 ? 4 : 8) << ":" << here.str() << ";";
        o.check(info->lost.size() == 4 && edges,
                "m=" + std::to_string(info == &m4 ? 4 : 8) +
                    " first merging roots are not k1, k2 and their mirrors");
    }
    if (!o.pass) o.detail << " | ";
    o.detail << "first merge gamma m=4: " << fmt(m4.gamma, 4) << ", m=8: " << fmt(m8.gamma, 4)
             << "; merging k/pi:" << where.str();
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> expected_fail;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail") {
            std::stringstream list(argv[i + 1]);
            std::string item;
            while (std::getline(list, item, ',')) expected_fail.insert(std::stoi(item));
        }
    }

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"even-N closest impurities", even_closest},
        {"odd-N closest impurities", odd_closest},
        {"end impurities, odd N", end_impurity},
        {"fragility scaling", scaling},
        {"degree of breaking", degree},
        {"oracle equivalence N <= 12", oracle_equivalence},
        {"invariant suite", invariants},
        {"closest-impurity wavefunction", wavefunction},
        {"root trajectories N = 20", root_trajectories},
    };

    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("threw: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) failed.insert(id);
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << criteria[i].first << ": "
                  << o.detail.str() << " (" << fmt(secs, 2) << " s)" << std::endl;
    }

    if (failed == expected_fail) return 0;
    for (int id : failed) {
        if (!expected_fail.count(id)) std::cout << "unexpected failure: " << id << "\n";
    }
    for (int id : expected_fail) {
        if (!failed.count(id)) std::cout << "expected failure now passes: " << id << "\n";
    }
    return 1;
}
