#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irsmec/channel.hpp"
#include "irsmec/optimizer.hpp"

namespace irsmec {

enum class Scheme { EfficiencyIrs, OmaIrs, OnlyOffIrs, EfficiencyNoIrs };

std::string_view scheme_label(Scheme s);
std::optional<Scheme> scheme_from_label(std::string_view label);
const std::vector<Scheme>& all_schemes();
SchemeTraits scheme_traits(Scheme s);

struct SchemeResult {
    Scheme scheme = Scheme::EfficiencyIrs;
    std::string label;
    double ee = 0.0;
    double sum_rate = 0.0;
    double sum_power = 0.0;
    int iterations = 0;
    bool converged = false;
    bool feasible = false;
    Allocation allocation;
    RunTrace trace;
};

/// Runs one scheme on a given snapshot. All schemes for one seed should be
/// fed the same realization for a paired comparison.
SchemeResult run_scheme(Scheme scheme, const ChannelRealization& real, const SystemConfig& cfg,
                        const SolverOptions& opts, const RandomStream& stream);

SchemeResult run_proposed(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                          const RandomStream& stream);
/// Equal bandwidth split (B/K per user, noise/K per subband), no interference.
SchemeResult run_oma(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                     const RandomStream& stream);
/// No local computing: f = 0 throughout.
SchemeResult run_onlyoff(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                         const RandomStream& stream);
/// Reflected path removed; phase block skipped.
SchemeResult run_noirs(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                       const RandomStream& stream);

}  // namespace irsmec
