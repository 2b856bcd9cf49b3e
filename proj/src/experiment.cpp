#include "irsmec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace irsmec {

const char* const kResultsHeader =
    "scheme,sweep_var,sweep_value,seed,ee_bits_per_joule,rate_bits_per_s,power_w,iterations,converged";

std::string_view sweep_label(SweepVariable v)
{
    switch (v) {
    case SweepVariable::RateThreshold:
        return "rth";
    case SweepVariable::IrsDistance:
        return "irs_distance";
    case SweepVariable::None:
        break;
    }
    return "none";
}

std::vector<std::string> ExperimentSpec::problems() const
{
    std::vector<std::string> out = base.problems();
    if (schemes.empty()) {
        out.emplace_back("schemes must not be empty");
    }
    if (seeds.empty()) {
        out.emplace_back("seeds must not be empty");
    }
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        out.emplace_back("seeds must be distinct");
    }
    if (sweep != SweepVariable::None) {
        if (grid.empty()) {
            out.emplace_back("grid must not be empty for a sweep");
        }
        if (!std::is_sorted(grid.begin(), grid.end())) {
            out.emplace_back("grid must be sorted ascending");
        }
        if (std::any_of(grid.begin(), grid.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
            out.emplace_back("grid values must be finite and >= 0");
        }
    }
    if (threads < 1) {
        out.emplace_back("threads must be >= 1");
    }
    if (!(max_infeasible_fraction >= 0.0 && max_infeasible_fraction <= 1.0)) {
        out.emplace_back("max_infeasible_fraction must lie in [0, 1]");
    }
    if (!(solver.tol > 0.0)) {
        out.emplace_back("solver.tol must be > 0");
    }
    if (solver.randomizations < 1) {
        out.emplace_back("solver.randomizations must be >= 1");
    }
    if (solver.max_newton < 1) {
        out.emplace_back("solver.max_newton must be >= 1");
    }
    if (!(solver.shrink > 0.0 && solver.shrink < 1.0)) {
        out.emplace_back("solver.shrink must lie in (0, 1)");
    }
    if (!(solver.mu0 > 0.0)) {
        out.emplace_back("solver.mu0 must be > 0");
    }
    return out;
}

void ExperimentSpec::validate() const
{
    auto p = problems();
    if (!p.empty()) {
        throw ConfigError(std::move(p));
    }
}

std::vector<double> ExperimentSpec::sweep_points() const
{
    switch (sweep) {
    case SweepVariable::RateThreshold:
    case SweepVariable::IrsDistance:
        return grid;
    case SweepVariable::None:
        break;
    }
    return {base.rate_threshold_bps};
}

SystemConfig apply_sweep(const SystemConfig& cfg, SweepVariable var, double value)
{
    SystemConfig out = cfg;
    if (var == SweepVariable::RateThreshold) {
        out.rate_threshold_bps = value;
    } else if (var == SweepVariable::IrsDistance) {
        out.irs_distance_offset_m = value;
    }
    return out;
}

int ExperimentResult::infeasible_runs() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.feasible; }));
}

RandomStream experiment_stream(std::uint64_t seed)
{
    return RandomStream(seed, "experiment");
}

ChannelRealization experiment_channels(const SystemConfig& cfg, std::uint64_t seed)
{
    return generate_channels(cfg, experiment_stream(seed).child("fading"));
}

namespace {

// Runs job(i) for i in [0, count) on `threads` workers. The first exception
// thrown by any job is rethrown after all workers stop.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job&& job)
{
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v, double mean)
{
    if (v.size() < 2) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    const std::vector<double> points = spec.sweep_points();
    const std::string var(sweep_label(spec.sweep));
    const std::size_t per_cell = spec.schemes.size();
    const std::size_t cells = points.size() * spec.seeds.size();

    ExperimentResult result;
    result.rows.resize(cells * per_cell);
    parallel_for(cells, spec.threads, [&](std::size_t cell) {
        const std::size_t pi = cell / spec.seeds.size();
        const std::uint64_t seed = spec.seeds[cell % spec.seeds.size()];
        const SystemConfig cfg = apply_sweep(spec.base, spec.sweep, points[pi]);
        const ChannelRealization real = experiment_channels(cfg, seed);
        const RandomStream stream = experiment_stream(seed);
        for (std::size_t s = 0; s < per_cell; ++s) {
            const SchemeResult r = run_scheme(spec.schemes[s], real, cfg, spec.solver, stream);
            ResultRow& row = result.rows[cell * per_cell + s];
            row.scheme = r.label;
            row.sweep_var = var;
            row.sweep_value = points[pi];
            row.seed = seed;
            row.ee = r.ee;
            row.rate = r.sum_rate;
            row.power = r.sum_power;
            row.iterations = r.iterations;
            row.converged = r.converged;
            row.feasible = r.feasible;
        }
    });
    result.summary = summarize(result.rows);
    return result;
}

ExperimentResult sweep_irs_distance(ExperimentSpec spec)
{
    spec.sweep = SweepVariable::IrsDistance;
    return run_experiment(spec);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows)
{
    // Groups keep first-appearance order.
    std::vector<SummaryRow> out;
    std::map<std::pair<std::string, double>, std::size_t> index;
    std::vector<std::vector<const ResultRow*>> members;
    for (const auto& row : rows) {
        const auto key = std::make_pair(row.scheme, row.sweep_value);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            SummaryRow s;
            s.scheme = row.scheme;
            s.sweep_var = row.sweep_var;
            s.sweep_value = row.sweep_value;
            out.push_back(s);
            members.emplace_back();
        }
        members[it->second].push_back(&row);
    }
    for (std::size_t g = 0; g < out.size(); ++g) {
        std::vector<double> ee;
        std::vector<double> rate;
        std::vector<double> power;
        for (const ResultRow* r : members[g]) {
            ee.push_back(r->ee);
            rate.push_back(r->rate);
            power.push_back(r->power);
            out[g].infeasible += r->feasible ? 0 : 1;
        }
        SummaryRow& s = out[g];
        s.count = static_cast<int>(ee.size());
        s.mean_ee = mean_of(ee);
        s.std_ee = stddev_of(ee, s.mean_ee);
        s.mean_rate = mean_of(rate);
        s.std_rate = stddev_of(rate, s.mean_rate);
        s.mean_power = mean_of(power);
        s.std_power = stddev_of(power, s.mean_power);
    }
    return out;
}

std::vector<TraceRow> convergence_trace(const ExperimentSpec& spec)
{
    spec.validate();
    const std::vector<double> thresholds =
        spec.sweep == SweepVariable::RateThreshold ? spec.grid : std::vector<double>{spec.base.rate_threshold_bps};
    const std::size_t cells = thresholds.size() * spec.seeds.size();
    std::vector<std::vector<TraceRow>> per_cell(cells);
    parallel_for(cells, spec.threads, [&](std::size_t cell) {
        const double rth = thresholds[cell / spec.seeds.size()];
        const std::uint64_t seed = spec.seeds[cell % spec.seeds.size()];
        SystemConfig cfg = spec.base;
        cfg.rate_threshold_bps = rth;
        const SchemeResult r = run_proposed(experiment_channels(cfg, seed), cfg, spec.solver, experiment_stream(seed));
        const bool exceeded = !r.converged;
        for (const auto& it : r.trace.iterations) {
            per_cell[cell].push_back({rth, seed, it.iteration, it.ee, exceeded, r.feasible});
        }
    });
    std::vector<TraceRow> out;
    for (auto& rows : per_cell) {
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.sweep_var << ',' << format_number(r.sweep_value) << ',' << r.seed << ','
            << format_number(r.ee) << ',' << format_number(r.rate) << ',' << format_number(r.power) << ','
            << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows)
{
    out << "scheme,sweep_var,sweep_value,runs,infeasible,mean_ee_bits_per_joule,std_ee_bits_per_joule,"
           "mean_rate_bits_per_s,std_rate_bits_per_s,mean_power_w,std_power_w\n";
    for (const auto& s : rows) {
        out << s.scheme << ',' << s.sweep_var << ',' << format_number(s.sweep_value) << ',' << s.count << ','
            << s.infeasible << ',' << format_number(s.mean_ee) << ',' << format_number(s.std_ee) << ','
            << format_number(s.mean_rate) << ',' << format_number(s.std_rate) << ',' << format_number(s.mean_power)
            << ',' << format_number(s.std_power) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows)
{
    out << "rate_threshold_bps,seed,iteration,ee_bits_per_joule,exceeded_max_iterations\n";
    for (const auto& r : rows) {
        out << format_number(r.rate_threshold) << ',' << r.seed << ',' << r.iteration << ',' << format_number(r.ee)
            << ',' << (r.exceeded_max_iterations ? 1 : 0) << '\n';
    }
}

}  // namespace irsmec
