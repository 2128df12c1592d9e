/*
 * Copyright (C) 2026 The identikit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// identikit: simulate, generate, select and fit from the command line.

#include "identikit/config.hpp"
#include "identikit/error.hpp"
#include "identikit/io.hpp"
#include "identikit/ols.hpp"
#include "identikit/subset_search.hpp"
#include "identikit/synthetic.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

using namespace identikit;

namespace
{

constexpr int exit_ok        = 0;
constexpr int exit_usage     = 1;
constexpr int exit_numerical = 2;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string grid;
    std::string subset;
    std::string data;
};

RunConfig resolve(const CommonFlags& flags)
{
    RunConfig c = flags.config.empty() ? RunConfig::defaults() : load_run_config(flags.config);
    if (!flags.out.empty()) {
        c.output_dir = flags.out;
    }
    if (flags.seed) {
        c.seed = *flags.seed;
    }
    if (!flags.grid.empty()) {
        c.grid = parse_grid_spec(flags.grid);
    }
    if (!flags.subset.empty()) {
        c.fit_subset = split_names(flags.subset);
    }
    c.validate(*make_model(c.model));
    return c;
}

int cmd_simulate(const RunConfig& c)
{
    const auto model = make_model(c.model);
    const auto grid  = c.grid.make();
    const auto traj  = simulate(*model, c.nominal, grid, c.integrator);
    const auto z     = output_series(*model, c.nominal, grid, c.integrator);
    io::write_trajectory_csv(c.output_dir / "trajectory.csv", traj, model->state_names());
    io::write_series_csv(c.output_dir / "incidence.csv", grid.points(), z, "z");
    std::cout << "simulate: n=" << grid.size() << " total output=" << io::format_number(z.sum()) << '\n'
              << "wrote " << (c.output_dir / "trajectory.csv").string() << '\n'
              << "wrote " << (c.output_dir / "incidence.csv").string() << '\n';
    return exit_ok;
}

int cmd_generate(const RunConfig& c)
{
    const auto model = make_model(c.model);
    const auto data  = generate(*model, c.nominal, c.grid.make(), NoiseSpec{std::sqrt(c.sigma0_sq), c.seed},
                                c.integrator);
    const auto path  = c.output_dir / ("data_seed" + std::to_string(c.seed) + ".csv");
    io::write_dataset_csv(path, data);
    std::cout << "generate: " << data.provenance << " sigma0_sq=" << io::format_number(c.sigma0_sq)
              << " n=" << data.grid.size() << '\n'
              << "wrote " << path.string() << '\n';
    return exit_ok;
}

void print_reports(const std::vector<SubsetReport>& reports, std::size_t limit)
{
    std::cout << "  " << std::left << std::setw(40) << "subset" << std::right << std::setw(12) << "kappa"
              << std::setw(12) << "alpha" << '\n';
    std::size_t shown = 0;
    for (const auto& r : reports) {
        if (shown++ == limit) {
            std::cout << "  ... " << reports.size() - limit << " more\n";
            break;
        }
        std::cout << "  " << std::left << std::setw(40) << r.subset.label(",") << std::right << std::scientific
                  << std::setprecision(2) << std::setw(12) << *r.kappa << std::setw(12) << *r.score
                  << std::defaultfloat << '\n';
    }
}

int cmd_select(const RunConfig& c, const std::string& only_subset, std::size_t table_rows)
{
    const auto model = make_model(c.model);
    SelectionContext ctx{
        .model      = model.get(),
        .nominal    = c.nominal,
        .grid       = c.grid.make(),
        .integrator = c.integrator,
        .sigma0_sq  = c.sigma0_sq,
        .rank_tolerance = std::nullopt,
        .threads    = c.threads,
    };

    if (!only_subset.empty()) {
        const auto spec   = SubsetSpec::from_active(*model, split_names(only_subset), c.nominal);
        const auto report = evaluate_subset(spec, ctx);
        const auto path   = c.output_dir / ("subset_" + spec.label("_") + ".csv");
        io::write_subset_reports_csv(path, {report});
        std::cout << "select: " << spec.label(",") << " p=" << report.p << " rank=" << report.rank << " "
                  << report.status;
        if (report.rank_ok) {
            std::cout << " kappa=" << io::format_number(*report.kappa) << " alpha=" << io::format_number(*report.score);
        }
        std::cout << "\nwrote " << path.string() << '\n';
        return exit_ok;
    }

    for (std::size_t j = c.j_min; j <= c.j_max; ++j) {
        const auto subsets  = enumerate_subsets(j, c.core, c.pool, *model, c.nominal);
        const auto reports  = evaluate_subsets(subsets, ctx);
        const auto feasible = feasibility_cut(reports, c.thresholds);
        const std::size_t p = j + c.core.size();
        std::size_t full    = 0;
        for (const auto& r : reports) {
            full += r.rank_ok ? 1 : 0;
        }
        io::write_subset_reports_csv(c.output_dir / ("subsets_p" + std::to_string(p) + ".csv"), reports);
        io::write_scatter_csv(c.output_dir / ("scatter_p" + std::to_string(p) + ".csv"), reports);
        std::cout << "p=" << p << ": " << subsets.size() << " subsets, " << full << " full rank, " << feasible.size()
                  << " feasible (kappa<=" << io::format_number(c.thresholds.kappa_max)
                  << ", alpha<=" << io::format_number(c.thresholds.alpha_max) << ")\n";
        if (!feasible.empty()) {
            print_reports(feasible, table_rows);
        }
    }
    std::cout << "wrote subsets_p*.csv and scatter_p*.csv to " << c.output_dir.string() << '\n';
    return exit_ok;
}

int cmd_fit(const RunConfig& c, const std::string& data_path, const std::string& start)
{
    if (data_path.empty()) {
        throw Error(ErrorKind::InvalidArgument, "fit needs --data <csv>");
    }
    const auto model = make_model(c.model);
    const auto data  = io::read_dataset_csv(data_path, c.grid.t0);
    const auto spec  = SubsetSpec::from_active(*model, c.fit_subset, c.nominal);

    Eigen::VectorXd start_full = c.nominal;
    if (!start.empty()) {
        for (const auto& item : split_names(start)) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorKind::InvalidArgument, "--start expects name=value pairs, got '" + item + "'");
            }
            const auto idx = model->require_index(item.substr(0, eq));
            start_full[static_cast<Eigen::Index>(idx)] = io::parse_number(item.substr(eq + 1));
        }
    }

    FitConfig fc      = FitConfig::defaults(*model, spec, start_full);
    fc.max_iterations = c.fit_max_iterations;
    fc.gradient_tol   = c.fit_gradient_tol;
    fc.step_tol       = c.fit_step_tol;
    fc.function_tol   = c.fit_function_tol;

    const auto result      = fit(data, *model, spec, fc, c.integrator);
    const auto diagnostics = residual_diagnostics(result.residuals, result.times);

    std::filesystem::create_directories(c.output_dir);
    {
        std::ofstream os(c.output_dir / "fit_report.json", std::ios::binary);
        os << io::fit_report_json(result, diagnostics, data);
    }
    io::write_residuals_csv(c.output_dir / "residuals.csv", data, result);

    std::cout << "fit: " << spec.label(",") << " on " << data.provenance << '\n';
    io::print_fit_table(std::cout, result);
    std::cout << "objective=" << io::format_number(result.objective)
              << " sigma_hat_sq=" << io::format_number(result.sigma_hat_sq) << " iterations=" << result.iterations
              << " termination=" << result.termination << '\n'
              << "residuals: mean=" << io::format_number(diagnostics.mean)
              << " lag1=" << io::format_number(diagnostics.lag1_autocorrelation) << " runs=" << diagnostics.runs
              << " (expected " << io::format_number(diagnostics.expected_runs) << ")\n";
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    std::cout << "wrote " << (c.output_dir / "fit_report.json").string() << " and residuals.csv\n";

    if (!result.converged) {
        std::cerr << "error: fit did not converge (" << result.termination << ")\n";
        return exit_numerical;
    }
    if (result.rank_deficient_at_solution) {
        std::cerr << "error: sensitivity matrix is rank deficient at the solution\n";
        return exit_numerical;
    }
    return exit_ok;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::StepLimitExceeded:
    case ErrorKind::NonFiniteState:
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::RankDeficient:
    case ErrorKind::NegativeDiagonal:
    case ErrorKind::ZeroParameterValue:
    case ErrorKind::DegenerateDof:
        return exit_numerical;
    default:
        return exit_usage;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Practical identifiability of ODE model parameters: simulate, generate synthetic data,\n"
                 "rank parameter subsets by sensitivity conditioning and CV score, and fit by OLS."};
    app.footer("\n" + describe_defaults() +
               "\nExit status: 0 success, 1 usage or config error, 2 numerical failure.\n");
    app.require_subcommand(1);

    CommonFlags flags;
    app.add_option("--config", flags.config, "INI config file (defaults listed below)")->check(CLI::ExistingFile);
    app.add_option("--out", flags.out, "Output directory (overrides [output] dir)");
    app.add_option("--seed", flags.seed, "Noise seed (overrides [noise] seed)");
    app.add_option("--grid", flags.grid, "Observation grid t0:span:cadence in years, e.g. 0:5:1/52");
    app.add_option("--subset", flags.subset, "Comma list of active parameters (fit; select evaluates just this one)");
    app.add_option("--data", flags.data, "Observation CSV with header t,y (fit)");
    app.fallthrough();

    auto* sim = app.add_subcommand("simulate", "Write trajectory.csv (t,S,E,I,R) and incidence.csv (t,z)");
    auto* gen = app.add_subcommand("generate", "Write data_seed{S}.csv: incidence plus N(0, sigma0_sq) noise");
    auto* sel = app.add_subcommand("select", "Rank subsets: subsets_p{p}.csv, scatter_p{p}.csv, feasible table");
    std::size_t rows = 10;
    std::optional<std::size_t> j_min, j_max;
    sel->add_option("--rows", rows, "Feasible subsets printed per p")->capture_default_str();
    sel->add_option("--j-min", j_min, "Smallest number of pool parameters (overrides [select] j_min)");
    sel->add_option("--j-max", j_max, "Largest number of pool parameters (overrides [select] j_max)");
    auto* fitc = app.add_subcommand("fit", "OLS fit: fit_report.json, residuals.csv and an estimate table");
    std::string start;
    fitc->add_option("--start", start, "Initial guess overrides, e.g. L=4,beta0=300 (default: nominal values)");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig c = resolve(flags);
        if (*sim) {
            return cmd_simulate(c);
        }
        if (*gen) {
            return cmd_generate(c);
        }
        if (*sel) {
            if (j_min) {
                c.j_min = *j_min;
            }
            if (j_max) {
                c.j_max = *j_max;
            }
            c.validate(*make_model(c.model));
            return cmd_select(c, flags.subset, rows);
        }
        return cmd_fit(c, flags.data, start);
    }
    catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
