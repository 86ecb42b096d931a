#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zenochain/simulate.hpp"

namespace zenochain {

enum class Scenario {
    Standard,
    Dephasing,
    Detuning,
    Combined,
    RandomPhase,
    NumberState,
    CoherentState,
    AtomicEquivalence,
};

const char* scenario_name(Scenario s);
std::optional<Scenario> scenario_from_name(const std::string& name);

enum class OutputFormat { Csv, JsonLines };

/// A configuration parse or validation failure, carrying the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ScenarioSpec {
    Scenario scenario = Scenario::Standard;
    ChainParams params{1.0, 1.0, 0.0};
    double t = 1.0;
    std::vector<int> n_list;           // one entry for a single run
    double phi_total = 0.0;            // spread evenly over the steps
    std::vector<double> explicit_phases;  // overrides phi_total when nonempty
    int photons = 1;                   // number_state
    Complex alpha{1.0, 0.0};           // coherent_state
    int cutoff = 0;                    // coherent_state; 0 selects the default rule
    int trials = 0;                    // random_phase
    std::optional<std::uint64_t> seed; // random_phase
    std::optional<std::string> sweep_variable;  // phi | delta | theta | t
    std::vector<double> grid;
    std::string out_path;
    OutputFormat format = OutputFormat::Csv;
    int jobs = 1;
};

/// Flat `key = value` configuration, `#` comments. Throws ConfigError naming
/// the offending key on any parse or validation problem.
ScenarioSpec parse_config(std::istream& in);
ScenarioSpec parse_config_file(const std::string& path);

struct ResultRow {
    std::string scenario;
    int n = 0;
    double t = 0.0;
    std::optional<double> phi;  // absent for random-phase runs
    double delta = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double P = 0.0;
    double p = 0.0;
    double p_limit = 0.0;
    double abs_error = 0.0;  // |p - p_limit|
    double entropy_final = 0.0;
    std::optional<std::uint64_t> seed;  // present for stochastic runs
};

std::vector<ResultRow> run_scenario(const ScenarioSpec& spec);
std::vector<ResultRow> convergence_scan(const ScenarioSpec& spec);
std::vector<ResultRow> sweep(const ScenarioSpec& spec, const std::string& variable,
                             std::span<const double> grid);

inline constexpr const char* kCsvHeader =
    "scenario,n,t,phi,delta,kappa1,kappa2,P,p,p_limit,abs_error,entropy_final,seed";

void write_csv(std::ostream& out, std::span<const ResultRow> rows);
void write_jsonl(std::ostream& out, std::span<const ResultRow> rows);

/// Least-squares slope of log(y) vs log(x); empty when fewer than two
/// usable (positive) points remain.
std::optional<double> fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Emitted-value sanity checks; returns a diagnostic for the first violation.
std::optional<std::string> check_row_invariants(std::span<const ResultRow> rows);

/// Prepends the ZENO_CHAIN_OUT_DIR directory to relative output paths.
std::string resolve_output_path(const std::string& path);

/// Built-in invariant suite; prints one PASS/FAIL line per check and returns
/// the number of failures.
int run_verify(std::ostream& out);

std::string scenarios_help();

}  // namespace zenochain
