// zeno-chain: scenario runner for measurement-modified dynamics of the
// A1-B-A2 oscillator chain. See `zeno-chain scenarios` for the config keys.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zenochain/runner.hpp"

namespace {

int run_command(const std::string& config_path, const std::optional<std::string>& out_path,
                const std::optional<std::string>& format,
                const std::optional<std::uint64_t>& seed, const std::optional<int>& jobs) {
    zenochain::ScenarioSpec spec = zenochain::parse_config_file(config_path);
    if (out_path) spec.out_path = *out_path;
    if (format) {
        if (*format == "csv")
            spec.format = zenochain::OutputFormat::Csv;
        else if (*format == "jsonl")
            spec.format = zenochain::OutputFormat::JsonLines;
        else
            throw zenochain::ConfigError("format", "expected csv or jsonl");
    }
    if (seed) spec.seed = *seed;
    if (jobs) spec.jobs = *jobs;

    std::vector<zenochain::ResultRow> rows = zenochain::run_scenario(spec);

    if (auto problem = zenochain::check_row_invariants(rows)) {
        std::cerr << "invariant violation: " << *problem << "\n";
        return 1;
    }
    if (rows.size() > 1) {
        // Convergence diagnostic on the emitted columns.
        std::vector<double> ns, residual, errs;
        for (const auto& row : rows) {
            ns.push_back(row.n);
            residual.push_back(1.0 - row.P);
            errs.push_back(row.abs_error);
        }
        if (auto slope = zenochain::fit_loglog_slope(ns, residual))
            std::cerr << "log-log slope of (1 - P) vs n: " << *slope << "\n";
        if (auto slope = zenochain::fit_loglog_slope(ns, errs))
            std::cerr << "log-log slope of abs_error vs n: " << *slope << "\n";
    }

    const std::string resolved = zenochain::resolve_output_path(spec.out_path);
    std::ofstream file;
    if (!resolved.empty()) {
        file.open(resolved, std::ios::trunc);
        if (!file) {
            std::cerr << "cannot open output file '" << resolved << "'\n";
            return 1;
        }
    }
    std::ostream& out = resolved.empty() ? std::cout : file;
    if (spec.format == zenochain::OutputFormat::Csv)
        zenochain::write_csv(out, rows);
    else
        zenochain::write_jsonl(out, rows);
    if (!resolved.empty())
        std::cerr << rows.size() << " row(s) written to " << resolved << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-modified dynamics of a three-oscillator chain"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_path, format;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;

    CLI::App* run = app.add_subcommand("run", "execute a scenario config and emit rows");
    run->add_option("config", config_path, "flat key = value config file")->required();
    run->add_option("--out", out_path, "output path (default: stdout)");
    run->add_option("--format", format, "csv or jsonl");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--jobs", jobs, "parallel workers for grids and trials");

    CLI::App* verify = app.add_subcommand("verify", "run the built-in invariant suite");
    CLI::App* scenarios = app.add_subcommand("scenarios", "list scenario names and keys");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, out_path, format, seed, jobs);
        if (verify->parsed()) {
            int failures = zenochain::run_verify(std::cout);
            if (failures) std::cout << failures << " check(s) failed\n";
            return failures == 0 ? 0 : 1;
        }
        if (scenarios->parsed()) {
            std::cout << zenochain::scenarios_help();
            return 0;
        }
    } catch (const zenochain::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
