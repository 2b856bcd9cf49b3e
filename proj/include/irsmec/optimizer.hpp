#pragma once

#include <vector>

#include "irsmec/channel.hpp"
#include "irsmec/config.hpp"
#include "irsmec/random.hpp"
#include "irsmec/ratemodel.hpp"
#include "irsmec/solvers.hpp"

namespace irsmec {

/// What happened to one block inside an outer iteration.
struct BlockOutcome {
    bool solved = false;    // subproblem feasible
    bool accepted = false;  // new block replaced the previous one
    bool rank_one = true;   // lifted solution was numerically rank one (SDR blocks)
    double relaxed_objective = 0.0;  // subproblem optimum, bits/s
    double objective_after = 0.0;    // parametric objective once the block is settled, bits/s
};

struct IterationRecord {
    int iteration = 0;
    double ee = 0.0;           // bits/J
    double sum_rate = 0.0;     // bits/s
    double sum_power = 0.0;    // W
    std::vector<double> rates; // per-user total rate, bits/s
    double eta1 = 0.0;         // ratio used during this iteration
    std::vector<double> t;     // multipliers used during this iteration
    double objective_before = 0.0;
    BlockOutcome power_freq;
    BlockOutcome beams;
    BlockOutcome phase;
    bool feasible = false;
    double seconds = 0.0;
    Allocation allocation;
};

struct RunTrace {
    double initial_ee = 0.0;
    bool initial_feasible = false;
    std::vector<IterationRecord> iterations;

    /// EE after each iteration.
    [[nodiscard]] std::vector<double> ee_sequence() const;
    /// Running maximum of ee_sequence() over feasible iterates, seeded with
    /// the initial point when it is feasible.
    [[nodiscard]] std::vector<double> best_so_far() const;
};

struct Initialization {
    Allocation alloc;
    AuxState aux;
    bool feasible = false;
};

struct RunResult {
    Allocation allocation;  // best feasible iterate (initial point if none improved)
    double ee = 0.0;
    double sum_rate = 0.0;
    double sum_power = 0.0;
    int iterations = 0;
    bool converged = false;
    bool feasible = false;
    RunTrace trace;
};

/// w = all ones (identity reflection), matched-filter beams, half the power
/// budget on transmission and a quarter on computing, tight multipliers and
/// eta1 at the resulting EE.
Initialization initialize(const ChannelRealization& real, const SystemConfig& cfg, const SchemeTraits& traits = {});

/// Parametric ratio update: total rate / total power at `alloc`.
double dinkelbach_update(const ChannelRealization& real, const Allocation& alloc, const SystemConfig& cfg,
                         Access access = Access::Noma);

/// Power cap, rate threshold (true rates), unit-modulus phases and unit-norm
/// beams, each to `tol` (relative for rates and powers).
bool allocation_feasible(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                         Access access = Access::Noma, double tol = 1e-6);

/// Alternating optimization: power/frequency, then beams, then phases, then
/// multiplier and ratio updates, until the relative EE change drops to
/// cfg.tolerance or cfg.max_iterations is reached.
RunResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                    const RandomStream& stream, const SchemeTraits& traits = {});

}  // namespace irsmec
