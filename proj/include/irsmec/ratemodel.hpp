#pragma once

#include <vector>

#include "irsmec/channel.hpp"
#include "irsmec/config.hpp"
#include "irsmec/numerics.hpp"

namespace irsmec {

/// NOMA with SIC (all users on the full band), or FDMA with an equal split
/// of bandwidth and noise among the users.
enum class Access { Noma, Fdma };

/// Decision variables. Indexed by user, not by SIC position.
struct Allocation {
    std::vector<double> p;   // offload power, W
    std::vector<double> f;   // CPU frequency, cycles/s
    std::vector<CVector> m;  // unit-norm receive beams, length N
    CVector w;               // unit-modulus lifted phase vector, length M+1

    [[nodiscard]] int users() const { return static_cast<int>(p.size()); }
};

/// Multipliers of the -ln x bound and the parametric (Dinkelbach) ratio.
struct AuxState {
    std::vector<double> t;
    double eta1 = 0.0;
};

/// |w^H composite_k m_k|^2 for every user.
std::vector<double> channel_gains(const ChannelRealization& real, const Allocation& alloc);

/// sum over users decoded before k of p_i |g_i|^2.
double interference(const ChannelRealization& real, const Allocation& alloc, int k);

double sinr(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k,
            Access access = Access::Noma);
double offload_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k,
                    Access access = Access::Noma);
double local_rate(double f, double cycles_per_bit);
double total_power(const Allocation& alloc, const SystemConfig& cfg, int k);

double sum_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                Access access = Access::Noma);
double sum_power(const Allocation& alloc, const SystemConfig& cfg);
double energy_efficiency(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                         Access access = Access::Noma);

/// a0 |g_k|^2 with a0 = 1 / noise power.
double effective_gain(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k);

/// t = 1/x, the maximizer of phi(t) = -t x + ln t + 1. Throws for x <= 0.
double lemma1_update(double x);
double lemma1_phi(double t, double x);

/// Lower bound on the NOMA offload rate of user k, tight at
/// t_k = lemma1_update(a0 * interference + 1).
double surrogate_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                      const AuxState& aux, int k);

/// Multipliers that make surrogate_rate tight at `alloc`. All ones for FDMA.
std::vector<double> tight_multipliers(const ChannelRealization& real, const SystemConfig& cfg,
                                      const Allocation& alloc, Access access = Access::Noma);

/// Value of the parametric subproblem objective and the per-user rate
/// constraint slacks, computed from per-user channel gains |g_k|^2.
///
/// For NOMA the objective is the telescoped sum rate
/// (B/ln2) ln(1 + a0 sum_k p_k q_k) + sum_k f_k/C - eta1 sum_k P_k and the
/// slack of user k is its surrogate rate plus local rate minus the threshold.
/// For FDMA every user gets B/K and noise/K and there is no interference.
struct GainScore {
    double objective = 0.0;         // bits/s
    std::vector<double> slack;      // bits/s, one per user
    [[nodiscard]] double min_slack() const;
};

GainScore score_gains(const SystemConfig& cfg, const std::vector<int>& order, const std::vector<double>& p,
                      const std::vector<double>& f, const std::vector<double>& gains, const AuxState& aux,
                      Access access);

/// score_gains evaluated at the allocation's own channel gains.
GainScore score_allocation(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                           const AuxState& aux, Access access);

}  // namespace irsmec
