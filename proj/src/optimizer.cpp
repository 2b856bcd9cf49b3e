#include "irsmec/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace irsmec {

namespace {

using Clock = std::chrono::steady_clock;

CVector matched_filter(const ChannelRealization& real, int k, const CVector& w)
{
    CVector hbar = real.composite(k).adjoint() * w;
    const double norm = hbar.norm();
    if (!(norm > 0.0)) {
        CVector e = CVector::Zero(real.antennas());
        e(0) = 1.0;
        return e;
    }
    return hbar / norm;
}

bool meets_constraints(const GainScore& score, const SystemConfig& cfg)
{
    return score.min_slack() >= -slack_tolerance(cfg);
}

// Block replaces the incumbent only if it is feasible for the current
// multipliers and does not lower the parametric objective.
bool improves(const GainScore& candidate, const GainScore& incumbent, const SystemConfig& cfg)
{
    if (!meets_constraints(candidate, cfg)) {
        return false;
    }
    if (!meets_constraints(incumbent, cfg)) {
        return true;
    }
    return candidate.objective >= incumbent.objective;
}

void update_beams(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                  const SchemeTraits& traits, const AuxState& aux, const RandomStream& stream, Allocation& alloc,
                  BlockOutcome& outcome)
{
    const std::vector<ConicSolution> sols = solve_beamforming(real, alloc, aux, cfg, opts, traits);
    outcome.solved = sols.front().feasible;
    outcome.relaxed_objective = sols.front().objective;
    const GainScore incumbent = score_allocation(real, cfg, alloc, aux, traits.access);
    outcome.objective_after = incumbent.objective;
    if (!outcome.solved) {
        return;
    }
    const BeamRecovery rec = recover_beams(real, alloc, aux, cfg, opts, traits, sols, stream);
    outcome.rank_one = rec.rank_one;

    Allocation candidate = alloc;
    candidate.m = rec.beams;
    const GainScore score = score_allocation(real, cfg, candidate, aux, traits.access);
    if (improves(score, incumbent, cfg)) {
        alloc = std::move(candidate);
        outcome.accepted = true;
        outcome.objective_after = score.objective;
    }
}

void update_phase(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                  const SchemeTraits& traits, const AuxState& aux, RandomStream stream, Allocation& alloc,
                  BlockOutcome& outcome)
{
    const ConicSolution sol = solve_irs_phase(real, alloc, aux, cfg, opts, traits);
    outcome.solved = sol.feasible;
    outcome.relaxed_objective = sol.objective;
    const GainScore incumbent = score_allocation(real, cfg, alloc, aux, traits.access);
    outcome.objective_after = incumbent.objective;
    if (!outcome.solved) {
        return;
    }
    const RecoveredVector rec = recover_phase(real, alloc, aux, cfg, opts, traits, sol, stream);
    outcome.rank_one = rec.rank_one;

    Allocation candidate = alloc;
    candidate.w = rec.v;
    const GainScore score = score_allocation(real, cfg, candidate, aux, traits.access);
    if (improves(score, incumbent, cfg)) {
        alloc = std::move(candidate);
        outcome.accepted = true;
        outcome.objective_after = score.objective;
    }
}

void update_power_freq(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                       const SchemeTraits& traits, const AuxState& aux, Allocation& alloc, BlockOutcome& outcome)
{
    const PowerFreqSolution sol = solve_power_freq(real, alloc, aux, cfg, opts, traits);
    outcome.solved = sol.feasible;
    outcome.relaxed_objective = sol.objective;
    const GainScore incumbent = score_allocation(real, cfg, alloc, aux, traits.access);
    outcome.objective_after = incumbent.objective;
    if (!outcome.solved) {
        return;
    }
    Allocation candidate = alloc;
    candidate.p = sol.p;
    candidate.f = sol.f;
    const GainScore score = score_allocation(real, cfg, candidate, aux, traits.access);
    if (improves(score, incumbent, cfg)) {
        alloc = std::move(candidate);
        outcome.accepted = true;
        outcome.objective_after = score.objective;
    }
}

}  // namespace

std::vector<double> RunTrace::ee_sequence() const
{
    std::vector<double> out;
    out.reserve(iterations.size());
    for (const auto& it : iterations) {
        out.push_back(it.ee);
    }
    return out;
}

std::vector<double> RunTrace::best_so_far() const
{
    std::vector<double> out;
    double best = initial_feasible ? initial_ee : -std::numeric_limits<double>::infinity();
    for (const auto& it : iterations) {
        if (it.feasible) {
            best = std::max(best, it.ee);
        }
        out.push_back(best);
    }
    return out;
}

Initialization initialize(const ChannelRealization& real, const SystemConfig& cfg, const SchemeTraits& traits)
{
    const int users = real.users();
    const double budget = cfg.power_budget_w();
    Initialization init;
    Allocation& a = init.alloc;
    a.w = CVector::Ones(real.elements() + 1);
    a.p.assign(users, budget / 2.0);
    a.f.assign(users, traits.local_computing ? std::cbrt(budget / 4.0 / cfg.capacitance) : 0.0);
    for (int k = 0; k < users; ++k) {
        a.m.push_back(matched_filter(real, k, a.w));
    }
    init.aux.t = tight_multipliers(real, cfg, a, traits.access);
    init.aux.eta1 = dinkelbach_update(real, a, cfg, traits.access);
    init.feasible = allocation_feasible(real, cfg, a, traits.access);
    return init;
}

double dinkelbach_update(const ChannelRealization& real, const Allocation& alloc, const SystemConfig& cfg,
                         Access access)
{
    return energy_efficiency(real, cfg, alloc, access);
}

bool allocation_feasible(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                         Access access, double tol)
{
    for (int k = 0; k < real.users(); ++k) {
        if (alloc.p[k] < -tol || alloc.f[k] < -tol) {
            return false;
        }
        if (total_power(alloc, cfg, k) > cfg.power_cap_w * (1.0 + tol)) {
            return false;
        }
        const double rate = offload_rate(real, cfg, alloc, k, access) + local_rate(alloc.f[k], cfg.cycles_per_bit);
        if (rate < cfg.rate_threshold_bps - tol * std::max(1.0, cfg.rate_threshold_bps)) {
            return false;
        }
        if (std::abs(alloc.m[k].norm() - 1.0) > tol) {
            return false;
        }
    }
    for (Eigen::Index i = 0; i < alloc.w.size(); ++i) {
        if (std::abs(std::abs(alloc.w(i)) - 1.0) > tol) {
            return false;
        }
    }
    return true;
}

RunResult alternate(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                    const RandomStream& stream, const SchemeTraits& traits)
{
    cfg.validate();
    Initialization init = initialize(real, cfg, traits);
    Allocation alloc = init.alloc;
    AuxState aux = init.aux;

    RunResult result;
    result.trace.initial_ee = aux.eta1;
    result.trace.initial_feasible = init.feasible;
    result.allocation = alloc;
    result.ee = init.feasible ? aux.eta1 : -std::numeric_limits<double>::infinity();
    result.feasible = init.feasible;

    const RandomStream randomization = stream.child("randomization");
    double previous = aux.eta1;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const auto started = Clock::now();
        IterationRecord rec;
        rec.iteration = iter;
        rec.eta1 = aux.eta1;
        rec.t = aux.t;
        rec.objective_before = score_allocation(real, cfg, alloc, aux, traits.access).objective;

        const RandomStream iter_stream = randomization.child("iteration", static_cast<std::uint64_t>(iter));
        update_power_freq(real, cfg, opts, traits, aux, alloc, rec.power_freq);
        update_beams(real, cfg, opts, traits, aux, iter_stream.child("beams"), alloc, rec.beams);
        if (traits.use_irs) {
            update_phase(real, cfg, opts, traits, aux, iter_stream.child("phase"), alloc, rec.phase);
        } else {
            rec.phase.objective_after = rec.beams.objective_after;
        }

        const double ee = energy_efficiency(real, cfg, alloc, traits.access);
        rec.ee = ee;
        rec.sum_rate = sum_rate(real, cfg, alloc, traits.access);
        rec.sum_power = sum_power(alloc, cfg);
        for (int k = 0; k < real.users(); ++k) {
            rec.rates.push_back(offload_rate(real, cfg, alloc, k, traits.access) +
                                local_rate(alloc.f[k], cfg.cycles_per_bit));
        }
        rec.feasible = allocation_feasible(real, cfg, alloc, traits.access);
        rec.allocation = alloc;
        rec.seconds = std::chrono::duration<double>(Clock::now() - started).count();
        result.trace.iterations.push_back(rec);

        if (rec.feasible && (!result.feasible || ee > result.ee)) {
            result.allocation = alloc;
            result.ee = ee;
            result.feasible = true;
        }

        aux.t = tight_multipliers(real, cfg, alloc, traits.access);
        aux.eta1 = dinkelbach_update(real, alloc, cfg, traits.access);

        result.iterations = iter;
        if (ee != 0.0 && std::abs((ee - previous) / ee) <= cfg.tolerance) {
            result.converged = true;
            break;
        }
        previous = ee;
    }

    if (!result.feasible) {
        // Nothing feasible was ever seen; report the last iterate.
        result.allocation = alloc;
        result.ee = energy_efficiency(real, cfg, alloc, traits.access);
    }
    result.sum_rate = sum_rate(real, cfg, result.allocation, traits.access);
    result.sum_power = sum_power(result.allocation, cfg);
    return result;
}

}  // namespace irsmec
