#pragma once

#include <functional>
#include <vector>

#include "irsmec/barrier.hpp"
#include "irsmec/channel.hpp"
#include "irsmec/config.hpp"
#include "irsmec/numerics.hpp"
#include "irsmec/random.hpp"
#include "irsmec/ratemodel.hpp"

namespace irsmec {

struct SolverOptions {
    double tol = 1e-6;      // barrier duality-gap target, relative to the scaled objective
    int max_newton = 600;   // Newton steps per subproblem, both phases together
    double mu0 = 1.0;
    double shrink = 0.2;
    int randomizations = 200;  // Gaussian randomization count L
    double rank_one_threshold = 1e-6;  // rank-1 when lambda_max >= (1 - threshold) * trace

    [[nodiscard]] conic::Options conic() const { return {tol, max_newton, mu0, shrink}; }
};

/// How a scheme maps onto the common subproblem structure.
struct SchemeTraits {
    Access access = Access::Noma;
    bool local_computing = true;  // false forces f = 0
    bool use_irs = true;          // false skips the phase block
};

struct PowerFreqSolution {
    std::vector<double> p;
    std::vector<double> f;
    double objective = 0.0;       // bits/s, parametric objective at (p, f)
    double gap = 0.0;             // bits/s
    int iterations = 0;
    bool feasible = false;
    // Largest achievable min_k (rate_k - R_th) seen by the feasibility phase,
    // bits/s. NaN if the feasibility phase did not run.
    double best_margin_bps = 0.0;
};

/// Lifted solution: M_k for a beam, W for the phases.
struct ConicSolution {
    CMatrix x;
    double objective = 0.0;     // bits/s
    double kkt_residual = 0.0;  // barrier duality-gap bound, bits/s
    int iterations = 0;
    bool feasible = false;
    int violated_user = -1;     // user with the smallest slack when infeasible
};

/// Optimal offload power and CPU frequency for fixed beams and phases.
PowerFreqSolution solve_power_freq(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                                   const SystemConfig& cfg, const SolverOptions& opts,
                                   const SchemeTraits& traits = {});

/// SDR of the receive-beam block; one unit-trace PSD matrix per user. All
/// users share one problem, so the feasibility flags are identical.
std::vector<ConicSolution> solve_beamforming(const ChannelRealization& real, const Allocation& alloc,
                                             const AuxState& aux, const SystemConfig& cfg,
                                             const SolverOptions& opts, const SchemeTraits& traits = {});

/// SDR of the phase block over unit-diagonal PSD W of size M+1.
ConicSolution solve_irs_phase(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                              const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits = {});

enum class RecoveryMode { Beam, Phase };

struct RecoveredVector {
    CVector v;
    GainScore score;
    bool rank_one = false;
    bool feasible = false;
};

/// Scores a candidate vector (already mapped to the mode's constraint set).
using CandidateScorer = std::function<GainScore(const CVector&)>;

/// Maps a raw vector to the mode's feasible form: unit norm for beams,
/// entrywise unit modulus (last entry rotated to 1) for phases.
CVector map_to_feasible(const CVector& z, RecoveryMode mode);

/// Rank-1 extraction with Gaussian randomization fallback. Candidates are the
/// dominant eigenvector and L draws from CN(0, X), each mapped by
/// map_to_feasible; the best feasible one by objective wins. If none is
/// feasible, the least-violating candidate is returned with feasible = false.
/// `slack_tol` is the constraint tolerance in bits/s.
RecoveredVector recover_rank1(const CMatrix& x, const CandidateScorer& scorer, RecoveryMode mode, int draws,
                              RandomStream& stream, double slack_tol, double rank_one_threshold = 1e-6);

struct BeamRecovery {
    std::vector<CVector> beams;
    GainScore score;         // all recovered beams together
    bool rank_one = true;    // every lifted beam was numerically rank one
};

/// Recovers one beam per user from solve_beamforming's output. Users are
/// handled in index order; users not yet recovered contribute their lifted
/// gains Tr(H_k M_k) to the score of the candidate under test.
BeamRecovery recover_beams(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                           const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits,
                           const std::vector<ConicSolution>& lifted, const RandomStream& stream);

/// Recovers a unit-modulus lifted phase vector from solve_irs_phase's output.
RecoveredVector recover_phase(const ChannelRealization& real, const Allocation& alloc, const AuxState& aux,
                              const SystemConfig& cfg, const SolverOptions& opts, const SchemeTraits& traits,
                              const ConicSolution& lifted, RandomStream& stream);

/// theta_m in [0, 2pi) such that the reflection diag(exp(j theta)) realizes
/// the lifted vector w (length M+1): exp(j theta_m) = w_{M+1} / w_m.
std::vector<double> phases_from_lifted(const CVector& w);
/// Inverse of phases_from_lifted with w_{M+1} = 1.
CVector lifted_from_phases(const std::vector<double>& theta);

/// Rate-constraint tolerance used when judging recovered candidates.
double slack_tolerance(const SystemConfig& cfg);

}  // namespace irsmec
