#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "irsmec/baselines.hpp"
#include "irsmec/config.hpp"
#include "irsmec/solvers.hpp"

namespace irsmec {

enum class SweepVariable { None, RateThreshold, IrsDistance };

std::string_view sweep_label(SweepVariable v);

struct ExperimentSpec {
    SystemConfig base;
    SolverOptions solver;
    SweepVariable sweep = SweepVariable::None;
    std::vector<double> grid;  // ignored when sweep == None
    std::vector<std::uint64_t> seeds{1};
    std::vector<Scheme> schemes = all_schemes();
    std::string output_dir;
    int threads = 1;
    // Exit status 3 once more than this fraction of runs ends infeasible.
    double max_infeasible_fraction = 0.1;

    [[nodiscard]] std::vector<std::string> problems() const;
    void validate() const;  // throws ConfigError
    /// Sweep values actually visited: the grid, or the single base value.
    [[nodiscard]] std::vector<double> sweep_points() const;
};

/// Copy of `cfg` with the sweep variable set to `value`.
SystemConfig apply_sweep(const SystemConfig& cfg, SweepVariable var, double value);

struct ResultRow {
    std::string scheme;
    std::string sweep_var;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double ee = 0.0;
    double rate = 0.0;
    double power = 0.0;
    int iterations = 0;
    bool converged = false;
    bool feasible = false;
};

struct SummaryRow {
    std::string scheme;
    std::string sweep_var;
    double sweep_value = 0.0;
    int count = 0;
    int infeasible = 0;
    double mean_ee = 0.0;
    double std_ee = 0.0;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    double mean_power = 0.0;
    double std_power = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;  // ordered by (sweep value, seed, scheme) as listed in the spec
    std::vector<SummaryRow> summary;

    [[nodiscard]] int infeasible_runs() const;
};

/// Channel snapshot used for one (sweep value, seed) cell.
ChannelRealization experiment_channels(const SystemConfig& cfg, std::uint64_t seed);
RandomStream experiment_stream(std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentSpec& spec);
/// run_experiment with the sweep forced to the UE-IRS distance offset.
ExperimentResult sweep_irs_distance(ExperimentSpec spec);
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

struct TraceRow {
    double rate_threshold = 0.0;
    std::uint64_t seed = 0;
    int iteration = 0;
    double ee = 0.0;
    bool exceeded_max_iterations = false;
    bool run_feasible = true;  // whole run, not written to CSV
};

/// EE after every outer iteration of the proposed scheme, for each rate
/// threshold in the grid (or the base threshold) and each seed.
std::vector<TraceRow> convergence_trace(const ExperimentSpec& spec);

extern const char* const kResultsHeader;

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// Shortest decimal that round-trips the double.
std::string format_number(double v);

}  // namespace irsmec
