// Command-line front end for the experiment harness.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "irsmec/config_io.hpp"
#include "irsmec/experiment.hpp"

namespace {

using namespace irsmec;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

constexpr const char* kOutputEnv = "IRSMEC_OUTPUT_DIR";

struct CommonArgs {
    std::string config;
    std::string out;
    int seeds = 0;
    int threads = 0;
    std::vector<double> grid;
    std::optional<double> tol;
    std::optional<int> max_newton;
    std::optional<int> randomizations;
    std::optional<double> rank_one_threshold;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_grid)
{
    cmd->add_option("--config", args.config, "JSON experiment file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, std::string("Output directory (default: $") + kOutputEnv + " or ./results)");
    cmd->add_option("--seeds", args.seeds, "Use seeds 1..n instead of the configured list")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
    if (with_grid) {
        cmd->add_option("--grid", args.grid, "Sweep values, ascending")->delimiter(',');
    }
    cmd->add_option("--tol", args.tol, "Barrier duality-gap tolerance");
    cmd->add_option("--max-newton", args.max_newton, "Newton step limit per subproblem");
    cmd->add_option("--randomizations", args.randomizations, "Gaussian randomization draws");
    cmd->add_option("--rank-one-threshold", args.rank_one_threshold, "Relative eigenvalue gap accepted as rank one");
}

ExperimentSpec build_spec(const CommonArgs& args)
{
    ExperimentSpec spec = args.config.empty() ? ExperimentSpec{} : load_spec(args.config);
    if (args.seeds > 0) {
        spec.seeds.resize(static_cast<std::size_t>(args.seeds));
        std::iota(spec.seeds.begin(), spec.seeds.end(), std::uint64_t{1});
    }
    if (args.threads > 0) {
        spec.threads = args.threads;
    }
    if (!args.grid.empty()) {
        spec.grid = args.grid;
    }
    if (args.tol) {
        spec.solver.tol = *args.tol;
    }
    if (args.max_newton) {
        spec.solver.max_newton = *args.max_newton;
    }
    if (args.randomizations) {
        spec.solver.randomizations = *args.randomizations;
    }
    if (args.rank_one_threshold) {
        spec.solver.rank_one_threshold = *args.rank_one_threshold;
    }
    if (!args.out.empty()) {
        spec.output_dir = args.out;
    } else if (spec.output_dir.empty()) {
        const char* env = std::getenv(kOutputEnv);
        spec.output_dir = (env && *env) ? env : "results";
    }
    return spec;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    body(out);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed while writing " + path.string());
    }
    std::cout << "wrote " << path.string() << '\n';
}

void print_summary(const std::vector<SummaryRow>& rows)
{
    std::cout << std::left << std::setw(18) << "scheme" << std::setw(14) << "sweep_value" << std::setw(6) << "runs"
              << std::setw(16) << "mean_ee" << std::setw(16) << "std_ee" << "infeasible\n";
    for (const auto& s : rows) {
        std::cout << std::left << std::setw(18) << s.scheme << std::setw(14) << format_number(s.sweep_value)
                  << std::setw(6) << s.count << std::setw(16) << std::setprecision(6) << s.mean_ee << std::setw(16)
                  << s.std_ee << s.infeasible << '\n';
    }
}

int infeasible_status(int infeasible, std::size_t total, double limit)
{
    if (total == 0) {
        return kExitOk;
    }
    const double fraction = static_cast<double>(infeasible) / static_cast<double>(total);
    if (fraction > limit) {
        std::cerr << "error: " << infeasible << " of " << total << " runs ended infeasible (limit "
                  << limit * 100.0 << "%)\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int run_and_write(const ExperimentSpec& spec)
{
    const ExperimentResult result = run_experiment(spec);
    const fs::path dir(spec.output_dir);
    write_file(dir / "results.csv", [&](std::ostream& o) { write_results_csv(o, result.rows); });
    write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, result.summary); });
    print_summary(result.summary);
    return infeasible_status(result.infeasible_runs(), result.rows.size(), spec.max_infeasible_fraction);
}

int cmd_run(const CommonArgs& args)
{
    return run_and_write(build_spec(args));
}

int cmd_sweep_rth(const CommonArgs& args)
{
    ExperimentSpec spec = build_spec(args);
    spec.sweep = SweepVariable::RateThreshold;
    if (spec.grid.empty()) {
        spec.grid = {0.5e6, 1.0e6, 1.5e6, 2.0e6};
    }
    return run_and_write(spec);
}

int cmd_sweep_distance(const CommonArgs& args)
{
    ExperimentSpec spec = build_spec(args);
    spec.sweep = SweepVariable::IrsDistance;
    if (spec.grid.empty()) {
        spec.grid = {0.0, 10.0, 20.0, 30.0, 40.0};
    }
    return run_and_write(spec);
}

int cmd_trace(const CommonArgs& args)
{
    ExperimentSpec spec = build_spec(args);
    if (!args.grid.empty()) {
        spec.sweep = SweepVariable::RateThreshold;
    }
    const std::vector<TraceRow> rows = convergence_trace(spec);
    write_file(fs::path(spec.output_dir) / "convergence.csv", [&](std::ostream& o) { write_trace_csv(o, rows); });

    std::set<std::pair<double, std::uint64_t>> runs;
    std::set<std::pair<double, std::uint64_t>> infeasible;
    std::set<std::pair<double, std::uint64_t>> exceeded;
    for (const auto& r : rows) {
        runs.emplace(r.rate_threshold, r.seed);
        if (!r.run_feasible) {
            infeasible.emplace(r.rate_threshold, r.seed);
        }
        if (r.exceeded_max_iterations) {
            exceeded.emplace(r.rate_threshold, r.seed);
        }
    }
    std::cout << runs.size() << " runs, " << exceeded.size() << " hit the iteration limit\n";
    return infeasible_status(static_cast<int>(infeasible.size()), runs.size(), spec.max_infeasible_fraction);
}

int cmd_validate(const std::string& path)
{
    const ExperimentSpec spec = load_spec(path);
    std::cout << spec_to_json(spec).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-efficiency optimizer for IRS-assisted NOMA edge computing"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CommonArgs rth_args;
    CommonArgs dist_args;
    CommonArgs trace_args;
    std::string validate_path;

    add_common(app.add_subcommand("run", "Run every configured scheme, seed and sweep point"), run_args, true);
    add_common(app.add_subcommand("sweep-rth", "Sweep the per-user rate threshold (bits/s)"), rth_args, true);
    add_common(app.add_subcommand("sweep-irs-distance", "Sweep the extra UE-IRS distance (m)"), dist_args, true);
    add_common(app.add_subcommand("trace-convergence", "Per-iteration EE of the proposed scheme"), trace_args, true);
    app.add_subcommand("validate-config", "Check a configuration file and print it normalised")
        ->add_option("--config", validate_path, "JSON experiment file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "run") {
            return cmd_run(run_args);
        }
        if (name == "sweep-rth") {
            return cmd_sweep_rth(rth_args);
        }
        if (name == "sweep-irs-distance") {
            return cmd_sweep_distance(dist_args);
        }
        if (name == "trace-convergence") {
            return cmd_trace(trace_args);
        }
        return cmd_validate(validate_path);
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration:\n";
        for (const auto& p : e.problems()) {
            std::cerr << "  - " << p << '\n';
        }
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
