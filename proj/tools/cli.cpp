#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptchain/errors.hpp"
#include "ptchain/phase.hpp"
#include "ptchain/secular.hpp"
#include "ptchain/spectral.hpp"
#include "ptchain/wavefn.hpp"

namespace ptchain::cli {

namespace {

constexpr int kOracleLimit = 64;

struct RunConfig {
    std::string subcommand;
    int n_sites = 0;
    int impurity_site = 0;
    bool has_impurity_site = false;
    double gamma = 0.0;
    bool has_gamma = false;
    double hopping = 1.0;
    double gamma_min = 0.0;
    double gamma_max = 2.0;
    int gamma_steps = 21;
    std::optional<double> tolerance;
    std::string format = "csv";
    std::string out_path;
    std::string state = "ground";
    bool seed_oracle = false;
};

using Cell = std::variant<std::monostate, long long, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json extra_config = nlohmann::ordered_json::object();
};

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(double v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["subcommand"] = cfg.subcommand;
    j["n"] = cfg.n_sites;
    j["m"] = cfg.has_impurity_site ? nlohmann::ordered_json(cfg.impurity_site) : nullptr;
    j["gamma"] = cfg.has_gamma ? nlohmann::ordered_json(cfg.gamma) : nullptr;
    j["hopping"] = cfg.hopping;
    j["gamma_min"] = cfg.gamma_min;
    j["gamma_max"] = cfg.gamma_max;
    j["gamma_steps"] = cfg.gamma_steps;
    j["tol"] = cfg.tolerance ? nlohmann::ordered_json(*cfg.tolerance) : nullptr;
    j["state"] = cfg.state;
    j["seed_oracle"] = cfg.seed_oracle;
    return j;
}

void write_table(const Table& t, const RunConfig& cfg, std::ostream& os) {
    if (cfg.format == "json") {
        nlohmann::ordered_json doc;
        doc["config"] = config_json(cfg);
        for (const auto& [key, value] : t.extra_config.items()) doc["config"][key] = value;
        doc["records"] = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json rec;
            for (std::size_t i = 0; i < t.columns.size(); ++i) rec[t.columns[i]] = json_cell(row[i]);
            doc["records"].push_back(std::move(rec));
        }
        os << doc.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

bool raw_columns(const RunConfig& cfg) { return cfg.hopping != 1.0; }

void require_oracle_size(const RunConfig& cfg) {
    if (cfg.seed_oracle && cfg.n_sites > kOracleLimit) {
        throw ValidationError("--seed-oracle is limited to N <= " + std::to_string(kOracleLimit));
    }
}

Spectrum spectrum_for(const RunConfig& cfg, const ChainSpec& spec, double tolerance) {
    require_oracle_size(cfg);
    return cfg.seed_oracle ? all_eigenvalues_dense(spec, tolerance) : all_eigenvalues(spec, tolerance);
}

CriticalOptions critical_options(const RunConfig& cfg) {
    CriticalOptions opt;
    if (cfg.tolerance) opt.tolerance = *cfg.tolerance;
    opt.gamma_cap = cfg.gamma_max / cfg.hopping;
    if (cfg.seed_oracle) {
        require_oracle_size(cfg);
        opt.predicate = PhasePredicate::Dense;
    }
    return opt;
}

std::vector<double> gamma_grid(const RunConfig& cfg) {
    if (cfg.has_gamma) return {cfg.gamma};
    if (cfg.gamma_steps < 1) throw ValidationError("--gamma-steps must be >= 1");
    if (!(cfg.gamma_min >= 0.0) || !(cfg.gamma_max >= cfg.gamma_min)) {
        throw ValidationError("need 0 <= --gamma-min <= --gamma-max");
    }
    std::vector<double> grid;
    for (int i = 0; i < cfg.gamma_steps; ++i) {
        grid.push_back(cfg.gamma_steps == 1
                           ? cfg.gamma_min
                           : cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * i / (cfg.gamma_steps - 1));
    }
    return grid;
}

// Subcommands fill a table and return their exit status.

int cmd_spectrum(const RunConfig& cfg, Table& t) {
    const ChainSpec spec(cfg.n_sites, cfg.impurity_site, cfg.gamma, cfg.hopping);
    const Spectrum s =
        spectrum_for(cfg, spec, cfg.tolerance.value_or(kDefaultClassificationTolerance));
    t.columns = {"index", "re_E", "im_E", "is_real"};
    if (raw_columns(cfg)) t.columns.insert(t.columns.end(), {"re_E_raw", "im_E_raw"});
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const Complex e = s.eigenvalues[i];
        std::vector<Cell> row{static_cast<long long>(i), e.real() / cfg.hopping,
                              e.imag() / cfg.hopping, e.imag() == 0.0};
        if (raw_columns(cfg)) row.insert(row.end(), {e.real(), e.imag()});
        t.rows.push_back(std::move(row));
    }
    return kExitOk;
}

int cmd_roots(const RunConfig& cfg, Table& t, std::ostream& err) {
    const ChainSpec base(cfg.n_sites, cfg.impurity_site, 0.0, cfg.hopping);
    t.columns = {"gamma", "k_over_pi", "multiplicity"};
    if (raw_columns(cfg)) t.columns.push_back("gamma_raw");
    int status = kExitOk;
    for (double gamma : gamma_grid(cfg)) {
        try {
            const ChainSpec spec = base.with_gamma(gamma);
            const RootSet r = cfg.tolerance
                                  ? find_real_roots(spec, 16 * cfg.n_sites, *cfg.tolerance)
                                  : find_real_roots(spec);
            for (std::size_t i = 0; i < r.roots.size(); ++i) {
                std::vector<Cell> row{gamma / cfg.hopping, r.roots[i] / std::numbers::pi,
                                      static_cast<long long>(r.multiplicities[i])};
                if (raw_columns(cfg)) row.push_back(gamma);
                t.rows.push_back(std::move(row));
            }
        } catch (const NumericalError& e) {
            err << "roots: gamma=" << format_double(gamma) << ": " << e.what() << '\n';
            status = kExitNumerical;
        }
    }
    return status;
}

int cmd_critical(const RunConfig& cfg, Table& t) {
    const CriticalResult r =
        critical_gamma(cfg.n_sites, cfg.impurity_site, cfg.hopping, critical_options(cfg));
    const double j = cfg.hopping;
    t.columns = {"N", "m", "gamma_pt", "gamma_low", "gamma_high", "tolerance",
                 "n_complex_just_above"};
    std::vector<Cell> row{static_cast<long long>(cfg.n_sites),
                          static_cast<long long>(cfg.impurity_site),
                          r.gamma_pt / j,
                          r.gamma_low / j,
                          r.gamma_high / j,
                          r.tolerance / j,
                          static_cast<long long>(r.n_complex_just_above)};
    if (raw_columns(cfg)) {
        t.columns.insert(t.columns.end(), {"gamma_pt_raw", "gamma_low_raw", "gamma_high_raw"});
        row.insert(row.end(), {r.gamma_pt, r.gamma_low, r.gamma_high});
    }
    t.rows.push_back(std::move(row));
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, Table& t, std::ostream& err) {
    std::vector<int> sites;
    if (cfg.has_impurity_site) {
        sites.push_back(cfg.impurity_site);
    } else {
        for (int m = 1; m <= cfg.n_sites / 2; ++m) sites.push_back(m);
    }
    // Validate every site up front so bad input is a flag error, not a row error.
    for (int m : sites) ChainSpec(cfg.n_sites, m, 0.0, cfg.hopping);

    const auto points = sweep_phase_diagram(cfg.n_sites, sites, cfg.hopping, critical_options(cfg));
    t.columns = {"N", "m", "mu", "gamma_pt", "n_complex_saturated"};
    if (raw_columns(cfg)) t.columns.push_back("gamma_pt_raw");
    int status = kExitOk;
    for (const PhasePoint& p : points) {
        if (p.error) {
            err << "sweep: m=" << p.impurity_site << ": " << *p.error << '\n';
            status = kExitNumerical;
            continue;
        }
        std::vector<Cell> row{static_cast<long long>(p.n_sites),
                              static_cast<long long>(p.impurity_site), p.mu,
                              p.gamma_pt / cfg.hopping,
                              static_cast<long long>(p.n_complex_saturated)};
        if (raw_columns(cfg)) row.push_back(p.gamma_pt);
        t.rows.push_back(std::move(row));
    }
    return status;
}

int cmd_scaling(const RunConfig& cfg, Table& t) {
    // Same mu at N, 2N, 4N, 8N.
    ChainSpec(cfg.n_sites, cfg.impurity_site, 0.0, cfg.hopping);
    const double mu = static_cast<double>(cfg.impurity_site) / cfg.n_sites;
    std::vector<int> sizes;
    for (int f = 1; f <= 8; f *= 2) sizes.push_back(cfg.n_sites * f);
    const ScalingFit fit = fit_fragility_scaling(mu, sizes, cfg.hopping, critical_options(cfg));

    t.columns = {"N", "m", "mu", "gamma_pt", "exponent", "log_prefactor", "residual"};
    if (raw_columns(cfg)) t.columns.push_back("gamma_pt_raw");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const int scale = sizes[i] / cfg.n_sites;
        std::vector<Cell> row{static_cast<long long>(sizes[i]),
                              static_cast<long long>(cfg.impurity_site * scale),
                              mu,
                              fit.gamma_pts[i],
                              fit.exponent,
                              fit.log_prefactor,
                              fit.residual};
        if (raw_columns(cfg)) row.push_back(fit.gamma_pts[i] * cfg.hopping);
        t.rows.push_back(std::move(row));
    }
    return kExitOk;
}

std::size_t parse_state(const std::string& state, std::size_t count) {
    if (state == "ground") return count; // resolved by the caller
    std::size_t index = 0;
    const auto res = std::from_chars(state.data(), state.data() + state.size(), index);
    if (res.ec != std::errc{} || res.ptr != state.data() + state.size()) {
        throw ValidationError("--state must be 'ground' or a non-negative index, got '" + state + "'");
    }
    if (index >= count) {
        throw ValidationError("--state index " + state + " out of range for N=" +
                              std::to_string(count));
    }
    return index;
}

int cmd_wavefunction(const RunConfig& cfg, Table& t) {
    const ChainSpec spec(cfg.n_sites, cfg.impurity_site, cfg.gamma, cfg.hopping);
    const Spectrum s =
        spectrum_for(cfg, spec, cfg.tolerance.value_or(kDefaultClassificationTolerance));
    std::size_t index = parse_state(cfg.state, s.eigenvalues.size());
    if (index == s.eigenvalues.size()) index = ground_state_index(s);

    const Eigenvector psi = eigenvector_for(spec, s.eigenvalues[index]);
    t.extra_config["state_index"] = index;
    t.extra_config["state_energy"] = {psi.energy.real() / cfg.hopping,
                                      psi.energy.imag() / cfg.hopping};
    t.columns = {"site", "amplitude", "phase_over_pi"};
    for (const AmplitudePhaseProfile& p : amplitude_phase(psi)) {
        t.rows.push_back({static_cast<long long>(p.site), p.amplitude, p.phase / std::numbers::pi});
    }
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_m, bool needs_gamma) {
    sub->add_option("--n", cfg.n_sites, "Number of sites N")->required();
    auto* m = sub->add_option("--m", cfg.impurity_site, "Gain site m (loss sits at N+1-m)");
    if (needs_m) m->required();
    auto* g = sub->add_option("--gamma", cfg.gamma, "Impurity strength, same units as --hopping");
    if (needs_gamma) g->required();
    sub->add_option("--hopping", cfg.hopping, "Hopping J")->capture_default_str();
    sub->add_option("--gamma-min", cfg.gamma_min, "Grid start")->capture_default_str();
    sub->add_option("--gamma-max", cfg.gamma_max, "Grid end, or search cap (default 2J)");
    sub->add_option("--gamma-steps", cfg.gamma_steps, "Grid points")->capture_default_str();
    sub->add_option("--tol", cfg.tolerance, "Tolerance override (relative, units of J)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out_path, "Output file (default: stdout)");
    sub->add_option("--state", cfg.state, "ground or an index into the sorted spectrum")
        ->capture_default_str();
    sub->add_flag("--seed-oracle", cfg.seed_oracle, "Use the dense eigensolver")->group("");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of a PT-symmetric tight-binding chain", "ptchain"};
    app.require_subcommand(1);
    RunConfig cfg;

    struct Sub {
        const char* name;
        const char* help;
        bool needs_m;
        bool needs_gamma;
    };
    const Sub subs[] = {
        {"spectrum", "All eigenvalues at one gamma", true, true},
        {"roots", "Real quasimomenta over a gamma grid", true, false},
        {"critical", "Critical strength gamma_PT", true, false},
        {"sweep", "gamma_PT for every impurity site", false, false},
        {"scaling", "Fit gamma_PT ~ N^alpha at fixed m/N", true, false},
        {"wavefunction", "Amplitude and phase of one eigenstate", true, true},
    };
    for (const Sub& s : subs) {
        add_common(app.add_subcommand(s.name, s.help), cfg, s.needs_m, s.needs_gamma);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg_out, msg_err;
        const int code = app.exit(e, msg_out, msg_err);
        out << msg_out.str();
        err << msg_err.str();
        return code == 0 ? kExitOk : kExitInvalid;
    }

    for (const Sub& s : subs) {
        CLI::App* sub = app.get_subcommand(s.name);
        if (sub->parsed()) {
            cfg.subcommand = s.name;
            cfg.has_impurity_site = sub->count("--m") > 0;
            cfg.has_gamma = sub->count("--gamma") > 0;
            // The default grid end and search cap is 2J.
            if (sub->count("--gamma-max") == 0) cfg.gamma_max = 2.0 * cfg.hopping;
        }
    }

    Table table;
    int status = kExitOk;
    try {
        if (cfg.subcommand == "spectrum") {
            status = cmd_spectrum(cfg, table);
        } else if (cfg.subcommand == "roots") {
            status = cmd_roots(cfg, table, err);
        } else if (cfg.subcommand == "critical") {
            status = cmd_critical(cfg, table);
        } else if (cfg.subcommand == "sweep") {
            status = cmd_sweep(cfg, table, err);
        } else if (cfg.subcommand == "scaling") {
            status = cmd_scaling(cfg, table);
        } else {
            status = cmd_wavefunction(cfg, table);
        }
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }

    if (cfg.out_path.empty()) {
        write_table(table, cfg, out);
    } else {
        std::ofstream file(cfg.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.out_path << " for writing\n";
            return kExitInvalid;
        }
        write_table(table, cfg, file);
    }
    return status;
}

} // namespace ptchain::cli
