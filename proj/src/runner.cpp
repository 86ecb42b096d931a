#include "zenochain/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace zenochain {

namespace {

constexpr const char* kScenarioNames[] = {
    "standard",     "dephasing",      "detuning",       "combined",
    "random_phase", "number_state",   "coherent_state", "atomic_equivalence",
};

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

double parse_double(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + text + "'");
    }
}

long long parse_int(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "not an integer: '" + text + "'");
    }
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "not an unsigned integer: '" + text + "'");
    }
}

// Key-value store that tracks which keys were consumed, so leftovers can be
// reported as unknown keys.
class KeyValues {
public:
    explicit KeyValues(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    std::optional<std::string> take(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::optional<double> take_double(const std::string& key) {
        auto raw = take(key);
        if (!raw) return std::nullopt;
        return parse_double(key, *raw);
    }

    // Accepts `key` in radians or `key_pi` in units of pi.
    std::optional<double> take_angle(const std::string& key) {
        auto plain = take(key);
        auto in_pi = take(key + "_pi");
        if (plain && in_pi) throw ConfigError(key, "give either " + key + " or " + key + "_pi");
        if (plain) return parse_double(key, *plain);
        if (in_pi) return std::numbers::pi * parse_double(key + "_pi", *in_pi);
        return std::nullopt;
    }

    void finish() const {
        for (const auto& [key, value] : kv_)
            if (!used_.contains(key)) throw ConfigError(key, "unknown key");
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::clamp(jobs, 1, count);
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += jobs) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

InitialState initial_for(const ScenarioSpec& spec) {
    InitialState init;
    switch (spec.scenario) {
        case Scenario::NumberState:
            init.kind = InitialState::Kind::Number;
            init.photons = spec.photons;
            break;
        case Scenario::CoherentState:
            init.kind = InitialState::Kind::Coherent;
            init.alpha = spec.alpha;
            init.cutoff = spec.cutoff;
            break;
        default:
            init.kind = InitialState::Kind::OnePhoton;
            break;
    }
    return init;
}

ResultRow point_row(const ScenarioSpec& spec, const ChainParams& params, double t,
                    double phi_total, int n, int mc_jobs) {
    DerivedModeParams dm = derived_mode_params(params);
    std::optional<double> delta_opt;
    if (params.delta != 0.0) delta_opt = params.delta;

    ResultRow row;
    row.scenario = scenario_name(spec.scenario);
    row.n = n;
    row.t = t;
    row.delta = params.delta;
    row.kappa1 = params.kappa1;
    row.kappa2 = params.kappa2;

    if (spec.scenario == Scenario::RandomPhase) {
        EvolutionConfig cfg;
        cfg.params = params;
        cfg.total_time = t;
        cfg.steps = n;
        cfg.phases = PhaseSchedule::uniform_random(*spec.seed);
        MonteCarloResult mc = monte_carlo_random_phases(cfg, spec.trials, mc_jobs);
        row.P = mc.mean_success;
        row.p = mc.mean_p;
        row.p_limit = random_phase_average(params.kappa1, params.kappa2);
        row.entropy_final = mc.mean_entropy;
        row.seed = spec.seed;
    } else {
        std::vector<double> phases = spec.explicit_phases.empty()
                                         ? evenly_spread(phi_total, n)
                                         : spec.explicit_phases;
        double phi_used = 0.0;
        for (double phi : phases) phi_used += phi;

        EvolutionConfig cfg;
        cfg.params = params;
        cfg.total_time = t;
        cfg.steps = n;
        cfg.phases = PhaseSchedule::deterministic(phases);
        cfg.initial = initial_for(spec);
        Trajectory traj = run_postselected(cfg);
        const StepRecord& last = traj.records.back();
        row.phi = phi_used;
        row.P = last.success_prob;
        row.entropy_final = last.entropy;

        if (spec.scenario == Scenario::AtomicEquivalence) {
            // The p column reports the worst per-step amplitude discrepancy
            // between the bosonic one-photon run and the 3x3 three-level run.
            std::vector<ZetaPair> atomic =
                run_atomic_postselected(params, t, n, PhaseSchedule::deterministic(phases));
            double discrepancy = 0.0;
            for (std::size_t j = 0; j < atomic.size(); ++j) {
                discrepancy = std::max(
                    discrepancy, std::abs(atomic[j].zeta1 -
                                          traj.one_photon_amplitudes[j].zeta1));
                discrepancy = std::max(
                    discrepancy, std::abs(atomic[j].zeta2 -
                                          traj.one_photon_amplitudes[j].zeta2));
            }
            row.p = discrepancy;
            row.p_limit = 0.0;
        } else {
            row.p = last.transfer_prob;
            row.p_limit = limit_transfer_prob(dm.theta, phi_used, dm.kappa, t, delta_opt);
        }
    }
    row.abs_error = std::abs(row.p - row.p_limit);
    return row;
}

}  // namespace

const char* scenario_name(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

std::optional<Scenario> scenario_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
    return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error("config error: field '" + field + "': " + message),
      field_(std::move(field)) {}

ScenarioSpec parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicate key");
    }

    KeyValues keys(std::move(kv));
    ScenarioSpec spec;

    auto scen = keys.take("scenario");
    if (!scen) throw ConfigError("scenario", "required");
    auto parsed = scenario_from_name(*scen);
    if (!parsed) throw ConfigError("scenario", "unknown scenario '" + *scen + "'");
    spec.scenario = *parsed;

    if (auto v = keys.take_double("kappa1")) spec.params.kappa1 = *v;
    if (auto v = keys.take_double("kappa2")) spec.params.kappa2 = *v;
    if (auto v = keys.take_double("delta")) spec.params.delta = *v;
    if (spec.params.kappa1 == 0.0 && spec.params.kappa2 == 0.0)
        throw ConfigError("kappa1", "at least one coupling must be nonzero");

    if (auto v = keys.take_angle("t")) spec.t = *v;
    if (spec.t < 0.0) throw ConfigError("t", "must be >= 0");

    auto n_single = keys.take("n");
    auto n_list = keys.take("n_list");
    if (n_single && n_list) throw ConfigError("n", "give either n or n_list");
    if (n_single) spec.n_list = {static_cast<int>(parse_int("n", *n_single))};
    if (n_list) {
        for (const auto& item : split_commas(*n_list))
            spec.n_list.push_back(static_cast<int>(parse_int("n_list", item)));
    }
    if (spec.n_list.empty()) throw ConfigError("n", "required (or n_list)");
    for (int n : spec.n_list)
        if (n < 1) throw ConfigError("n", "step counts must be >= 1");

    if (auto v = keys.take_angle("phi")) spec.phi_total = *v;
    if (auto v = keys.take("phis")) {
        for (const auto& item : split_commas(*v))
            spec.explicit_phases.push_back(parse_double("phis", item));
    }

    if (auto v = keys.take("photons")) {
        if (spec.scenario != Scenario::NumberState)
            throw ConfigError("photons", "only valid for scenario number_state");
        spec.photons = static_cast<int>(parse_int("photons", *v));
        if (spec.photons < 1) throw ConfigError("photons", "must be >= 1");
    }
    auto alpha_re = keys.take_double("alpha_re");
    auto alpha_im = keys.take_double("alpha_im");
    auto cutoff = keys.take("cutoff");
    if ((alpha_re || alpha_im || cutoff) && spec.scenario != Scenario::CoherentState)
        throw ConfigError("alpha_re", "coherent-state keys only valid for scenario coherent_state");
    if (alpha_re || alpha_im)
        spec.alpha = Complex(alpha_re.value_or(0.0), alpha_im.value_or(0.0));
    if (cutoff) {
        spec.cutoff = static_cast<int>(parse_int("cutoff", *cutoff));
        if (spec.cutoff < 1) throw ConfigError("cutoff", "must be >= 1");
    }

    if (auto v = keys.take("trials")) {
        if (spec.scenario != Scenario::RandomPhase)
            throw ConfigError("trials", "only valid for scenario random_phase");
        spec.trials = static_cast<int>(parse_int("trials", *v));
    }
    if (auto v = keys.take("seed")) spec.seed = parse_u64("seed", *v);

    if (auto v = keys.take("sweep")) {
        spec.sweep_variable = *v;
        static const std::set<std::string> known = {"phi", "delta", "theta", "t"};
        if (!known.contains(*v)) throw ConfigError("sweep", "unknown sweep variable '" + *v + "'");
    }
    auto grid = keys.take("grid");
    auto grid_pi = keys.take("grid_pi");
    if (grid && grid_pi) throw ConfigError("grid", "give either grid or grid_pi");
    if (grid)
        for (const auto& item : split_commas(*grid))
            spec.grid.push_back(parse_double("grid", item));
    if (grid_pi)
        for (const auto& item : split_commas(*grid_pi))
            spec.grid.push_back(std::numbers::pi * parse_double("grid_pi", item));

    if (auto v = keys.take("out")) spec.out_path = *v;
    if (auto v = keys.take("format")) {
        if (*v == "csv")
            spec.format = OutputFormat::Csv;
        else if (*v == "jsonl")
            spec.format = OutputFormat::JsonLines;
        else
            throw ConfigError("format", "expected csv or jsonl");
    }
    if (auto v = keys.take("jobs")) {
        spec.jobs = static_cast<int>(parse_int("jobs", *v));
        if (spec.jobs < 1) throw ConfigError("jobs", "must be >= 1");
    }
    keys.finish();

    // Scenario-specific consistency.
    const bool has_dephasing = spec.phi_total != 0.0 || !spec.explicit_phases.empty();
    switch (spec.scenario) {
        case Scenario::Standard:
            if (has_dephasing) throw ConfigError("phi", "standard scenario has no dephasing");
            if (spec.params.delta != 0.0)
                throw ConfigError("delta", "standard scenario has no detuning");
            break;
        case Scenario::Dephasing:
            if (spec.params.delta != 0.0)
                throw ConfigError("delta", "dephasing scenario has no detuning");
            break;
        case Scenario::Detuning:
            if (has_dephasing) throw ConfigError("phi", "detuning scenario has no dephasing");
            if (spec.params.delta == 0.0)
                throw ConfigError("delta", "required nonzero for scenario detuning");
            break;
        case Scenario::Combined:
            if (spec.params.delta == 0.0)
                throw ConfigError("delta", "required nonzero for scenario combined");
            break;
        case Scenario::RandomPhase:
            if (has_dephasing)
                throw ConfigError("phi", "random_phase draws its phases; phi/phis conflict");
            if (spec.trials < 2) throw ConfigError("trials", "required (>= 2) for scenario random_phase");
            if (!spec.seed) throw ConfigError("seed", "required for scenario random_phase");
            break;
        default:
            break;
    }
    if (spec.sweep_variable) {
        if (spec.grid.empty()) throw ConfigError("grid", "required when sweep is set");
        if (spec.n_list.size() != 1) throw ConfigError("n", "sweep requires a single n");
    } else if (!spec.grid.empty()) {
        throw ConfigError("grid", "grid given without sweep");
    }
    return spec;
}

ScenarioSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

std::vector<ResultRow> run_scenario(const ScenarioSpec& spec) {
    if (spec.sweep_variable) return sweep(spec, *spec.sweep_variable, spec.grid);
    if (spec.n_list.size() > 1) return convergence_scan(spec);
    return {point_row(spec, spec.params, spec.t, spec.phi_total, spec.n_list.front(),
                      spec.jobs)};
}

std::vector<ResultRow> convergence_scan(const ScenarioSpec& spec) {
    if (spec.n_list.empty()) throw ConfigError("n_list", "required for a convergence scan");
    if (!std::is_sorted(spec.n_list.begin(), spec.n_list.end()))
        throw ConfigError("n_list", "must be ascending");
    std::vector<ResultRow> rows(spec.n_list.size());
    parallel_for(static_cast<int>(spec.n_list.size()), spec.jobs, [&](int i) {
        rows[static_cast<std::size_t>(i)] =
            point_row(spec, spec.params, spec.t, spec.phi_total,
                      spec.n_list[static_cast<std::size_t>(i)], 1);
    });
    return rows;
}

std::vector<ResultRow> sweep(const ScenarioSpec& spec, const std::string& variable,
                             std::span<const double> grid) {
    if (grid.empty()) throw ConfigError("grid", "sweep grid must be nonempty");
    if (spec.n_list.size() != 1) throw ConfigError("n", "sweep requires a single n");
    const int n = spec.n_list.front();

    std::vector<ResultRow> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), spec.jobs, [&](int i) {
        double g = grid[static_cast<std::size_t>(i)];
        ChainParams params = spec.params;
        double t = spec.t;
        double phi = spec.phi_total;
        if (variable == "phi") {
            phi = g;
        } else if (variable == "delta") {
            params.delta = g;
        } else if (variable == "t") {
            t = g;
        } else if (variable == "theta") {
            double kappa = derived_mode_params(spec.params).kappa;
            params.kappa1 = kappa * std::cos(g);
            params.kappa2 = kappa * std::sin(g);
        } else {
            throw ConfigError("sweep", "unknown sweep variable '" + variable + "'");
        }
        rows[static_cast<std::size_t>(i)] = point_row(spec, params, t, phi, n, 1);
    });
    return rows;
}

namespace {

void append_fields(std::string& line, const ResultRow& row, bool json) {
    auto field = [&](const char* name, const std::string& value) {
        if (json) {
            line += '"';
            line += name;
            line += "\":";
            line += value;
            line += ',';
        } else {
            line += value;
            line += ',';
        }
    };
    field("scenario", json ? "\"" + row.scenario + "\"" : row.scenario);
    field("n", std::to_string(row.n));
    field("t", fmt_g17(row.t));
    field("phi", row.phi ? fmt_g17(*row.phi) : (json ? "null" : ""));
    field("delta", fmt_g17(row.delta));
    field("kappa1", fmt_g17(row.kappa1));
    field("kappa2", fmt_g17(row.kappa2));
    field("P", fmt_g17(row.P));
    field("p", fmt_g17(row.p));
    field("p_limit", fmt_g17(row.p_limit));
    field("abs_error", fmt_g17(row.abs_error));
    field("entropy_final", fmt_g17(row.entropy_final));
    field("seed", row.seed ? std::to_string(*row.seed) : (json ? "null" : ""));
    line.pop_back();  // trailing comma
}

}  // namespace

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
    out << kCsvHeader << '\n';
    for (const ResultRow& row : rows) {
        std::string line;
        append_fields(line, row, false);
        out << line << '\n';
    }
}

void write_jsonl(std::ostream& out, std::span<const ResultRow> rows) {
    for (const ResultRow& row : rows) {
        std::string line = "{";
        append_fields(line, row, true);
        out << line << "}\n";
    }
}

std::optional<double> fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

std::optional<std::string> check_row_invariants(std::span<const ResultRow> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& row = rows[i];
        auto bad = [&](const std::string& what) {
            return "row " + std::to_string(i + 1) + " (" + row.scenario + ", n=" +
                   std::to_string(row.n) + "): " + what;
        };
        if (!(row.P >= 0.0 && row.P <= 1.0 + kNormTolerance))
            return bad("P out of [0,1]: " + fmt_g17(row.P));
        if (!(row.p >= 0.0 && row.p <= 1.0 + kNormTolerance))
            return bad("p out of [0,1]: " + fmt_g17(row.p));
        if (row.abs_error != std::abs(row.p - row.p_limit))
            return bad("abs_error does not match |p - p_limit|");
    }
    return std::nullopt;
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("ZENO_CHAIN_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string out = dir;
    if (out.back() != '/') out += '/';
    return out + path;
}

namespace {

using CheckFn = std::function<std::optional<std::string>()>;

std::optional<std::string> check_basis_roundtrip() {
    for (const FockBasis& b : {FockBasis::sector(3, 4), FockBasis::truncated({2, 3})}) {
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b.index_of(b.occupations(i)) != i) return "tuple/index bijection broken";
    }
    if (FockBasis::sector(3, 1).size() != 3 || FockBasis::sector(3, 2).size() != 6 ||
        FockBasis::sector(4, 3).size() != 20)
        return "sector size differs from the stars-and-bars count";
    return std::nullopt;
}

std::optional<std::string> check_step_unimodularity() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        StepFactor f = step_factor(3.0 * u(rng), 12.0 * (u(rng) - 0.5), 2.0 * u(rng));
        double r = std::norm(f.mu) + std::norm(f.nu);
        if (std::abs(r - 1.0) > 1e-12) return "|mu|^2 + |nu|^2 = " + fmt_g17(r);
    }
    return std::nullopt;
}

std::optional<std::string> check_rotation() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        ChainParams params{0.2 + 2.0 * u(rng), 0.2 + 2.0 * u(rng), 4.0 * (u(rng) - 0.5)};
        DerivedModeParams dm = derived_mode_params(params);
        for (int total : {1, 2}) {
            FockBasis b3 = FockBasis::sector(3, total);
            Matrix rot = mode_rotation_unitary(dm.theta, b3, 0, 2);
            Matrix eye = Matrix::Identity(rot.rows(), rot.cols());
            if ((Matrix(rot.adjoint()) * rot - eye).cwiseAbs().maxCoeff() > 1e-12)
                return "rotation is not unitary";
            Matrix h = build_chain_hamiltonian(params, b3);
            Matrix target =
                build_chain_hamiltonian({dm.kappa, 0.0, params.delta}, b3);
            if ((rot * h * rot.adjoint() - target).cwiseAbs().maxCoeff() > 1e-12)
                return "conjugated chain is not the single-coupling form";
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_number_conservation() {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FockBasis b = FockBasis::truncated({2, 2, 2});
    Matrix total = number_operator(b, 0) + number_operator(b, 1) + number_operator(b, 2);
    for (int i = 0; i < 5; ++i) {
        Matrix h = build_chain_hamiltonian(
            {2.0 * u(rng), 2.0 * u(rng), 4.0 * (u(rng) - 0.5)}, b);
        if ((h * total - total * h).cwiseAbs().maxCoeff() > 1e-12)
            return "[H, N_total] != 0";
    }
    return std::nullopt;
}

std::optional<std::string> check_spectrum() {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        ChainParams params{2.0 * u(rng) + 0.05, 2.0 * u(rng), 6.0 * (u(rng) - 0.5)};
        DerivedModeParams dm = derived_mode_params(params);
        double gamma = std::sqrt(dm.kappa * dm.kappa + params.delta * params.delta / 4.0);
        Matrix h = build_chain_hamiltonian(params, FockBasis::sector(3, 1));
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        std::vector<double> expected = {0.0, -params.delta / 2.0 + gamma,
                                        -params.delta / 2.0 - gamma};
        std::sort(expected.begin(), expected.end());
        for (int k = 0; k < 3; ++k)
            if (std::abs(es.eigenvalues()(k) - expected[static_cast<std::size_t>(k)]) > 1e-10)
                return "one-excitation spectrum differs from {0, -d/2 +- gamma}";
    }
    return std::nullopt;
}

std::optional<std::string> check_kraus_completeness() {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        ChainParams params{2.0 * u(rng), 2.0 * u(rng), 5.0 * (u(rng) - 0.5)};
        for (int total : {1, 2}) {
            FockBasis b3 = FockBasis::sector(3, total);
            Matrix h = build_chain_hamiltonian(params, b3);
            auto ops = kraus_set(b3, h, 0.3 + u(rng), total);
            Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(ops[0].in_basis.size()),
                                      static_cast<Eigen::Index>(ops[0].in_basis.size()));
            for (const auto& k : ops) sum += k.mat.adjoint() * k.mat;
            Matrix eye = Matrix::Identity(sum.rows(), sum.cols());
            if ((sum - eye).cwiseAbs().maxCoeff() > 1e-10) return "sum K^dag K != I";
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_analytic_numeric() {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        ChainParams params{0.1 + 1.9 * u(rng), 0.1 + 1.9 * u(rng), 8.0 * (u(rng) - 0.5)};
        DerivedModeParams dm = derived_mode_params(params);
        int n = 1 + static_cast<int>(99.0 * u(rng));
        double t = 0.1 + 2.9 * u(rng);
        std::vector<double> phis(static_cast<std::size_t>(n));
        for (auto& phi : phis) phi = 2.0 * std::numbers::pi * u(rng);

        EvolutionConfig cfg;
        cfg.params = params;
        cfg.total_time = t;
        cfg.steps = n;
        cfg.phases = PhaseSchedule::deterministic(phis);
        Trajectory traj = run_postselected(cfg);
        ZetaPair z = zeta_pair(chi_total(dm.kappa, params.delta, t, n,
                                         PhaseSchedule::deterministic(phis)),
                               dm.theta);
        double diff = std::max(std::abs(traj.one_photon_amplitudes.back().zeta1 - z.zeta1),
                               std::abs(traj.one_photon_amplitudes.back().zeta2 - z.zeta2));
        if (diff > 1e-9) return "amplitudes differ from the closed form by " + fmt_g17(diff);
    }
    return std::nullopt;
}

std::optional<std::string> check_success_monotone() {
    EvolutionConfig cfg;
    cfg.params = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, 0.0};
    cfg.total_time = 1.0;
    cfg.steps = 500;
    cfg.phases = PhaseSchedule::deterministic(evenly_spread(std::numbers::pi, 500));
    Trajectory traj = run_postselected(cfg);
    double prev = 1.0 + kNormTolerance;
    for (const StepRecord& rec : traj.records) {
        if (rec.success_prob > prev + 1e-12) return "success probability increased";
        if (rec.success_prob > 1.0 + kNormTolerance) return "success probability above 1";
        prev = rec.success_prob;
    }
    return std::nullopt;
}

std::optional<std::string> check_mc_determinism() {
    EvolutionConfig cfg;
    cfg.params = {1.0, 1.0, 0.0};
    cfg.total_time = 1.0;
    cfg.steps = 50;
    cfg.phases = PhaseSchedule::uniform_random(424242);
    MonteCarloResult a = monte_carlo_random_phases(cfg, 64, 1);
    MonteCarloResult b = monte_carlo_random_phases(cfg, 64, 4);
    if (a.mean_p != b.mean_p || a.std_error != b.std_error)
        return "same seed gave different results";
    return std::nullopt;
}

std::optional<std::string> check_coherent_norm() {
    double prev = 0.0;
    for (int cutoff = 2; cutoff <= 16; ++cutoff) {
        double n2 = coherent_amplitudes(Complex(1.0, 0.0), cutoff).norm_squared();
        if (n2 + 1e-15 < prev) return "norm not monotone in the cutoff";
        prev = n2;
    }
    if (std::abs(prev - 1.0) > 1e-9) return "norm does not reach 1";
    return std::nullopt;
}

}  // namespace

int run_verify(std::ostream& out) {
    const std::vector<std::pair<const char*, CheckFn>> checks = {
        {"basis tuple/index bijection and sector sizes", check_basis_roundtrip},
        {"step factors stay unimodular", check_step_unimodularity},
        {"mode rotation unitary and single-coupling form", check_rotation},
        {"total photon number conserved", check_number_conservation},
        {"one-excitation spectrum", check_spectrum},
        {"Kraus completeness on sectors 1 and 2", check_kraus_completeness},
        {"closed form matches brute-force amplitudes", check_analytic_numeric},
        {"success probability nonincreasing", check_success_monotone},
        {"Monte Carlo reproducibility", check_mc_determinism},
        {"coherent amplitudes converge with cutoff", check_coherent_norm},
    };
    int failures = 0;
    for (const auto& [name, fn] : checks) {
        std::optional<std::string> problem;
        try {
            problem = fn();
        } catch (const std::exception& e) {
            problem = std::string("exception: ") + e.what();
        }
        if (problem) {
            ++failures;
            out << "FAIL  " << name << " (" << *problem << ")\n";
        } else {
            out << "PASS  " << name << "\n";
        }
    }
    return failures;
}

std::string scenarios_help() {
    return R"(scenarios and their configuration keys

  standard            frozen evolution under plain vacuum checks
                      keys: kappa1 kappa2 t n|n_list [jobs]
  dephasing           transfer driven by measurement phase shifts (delta = 0)
                      keys: kappa1 kappa2 t n|n_list phi|phi_pi|phis
  detuning            transfer via strong detuning (phi = 0)
                      keys: kappa1 kappa2 delta t n|n_list
  combined            detuning and dephasing together
                      keys: kappa1 kappa2 delta t n|n_list phi|phi_pi|phis
  random_phase        Monte Carlo average over uniform random phase kicks
                      keys: kappa1 kappa2 t n trials seed [jobs]
  number_state        N-photon input, reports the transferred fraction
                      keys: photons kappa1 kappa2 [delta] t n|n_list [phi...]
  coherent_state      coherent input, reports the transferred fraction
                      keys: alpha_re alpha_im [cutoff] kappa1 kappa2 [delta] t n|n_list [phi...]
  atomic_equivalence  bosonic vs three-level amplitudes; the p column holds
                      the worst per-step discrepancy and p_limit is 0
                      keys: kappa1 kappa2 [delta] t n [phi...]

common keys
  sweep = phi|delta|theta|t with grid|grid_pi sweeps one variable
  n_list = a,b,c runs a convergence scan (ascending)
  out, format = csv|jsonl, jobs, seed
  any angle key accepts a *_pi variant given in units of pi

csv columns
  )" + std::string(kCsvHeader) + "\n";
}

}  // namespace zenochain
