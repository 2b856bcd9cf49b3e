#include "irsmec/baselines.hpp"

#include <array>

namespace irsmec {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 4> kLabels{{
    {Scheme::EfficiencyIrs, "Efficiency-IRS"},
    {Scheme::OmaIrs, "OMA-IRS"},
    {Scheme::OnlyOffIrs, "OnlyOff-IRS"},
    {Scheme::EfficiencyNoIrs, "Efficiency-NoIRS"},
}};

}  // namespace

std::string_view scheme_label(Scheme s)
{
    for (const auto& [scheme, label] : kLabels) {
        if (scheme == s) {
            return label;
        }
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_label(std::string_view label)
{
    for (const auto& [scheme, name] : kLabels) {
        if (name == label) {
            return scheme;
        }
    }
    return std::nullopt;
}

const std::vector<Scheme>& all_schemes()
{
    static const std::vector<Scheme> schemes{Scheme::EfficiencyIrs, Scheme::OmaIrs, Scheme::OnlyOffIrs,
                                             Scheme::EfficiencyNoIrs};
    return schemes;
}

SchemeTraits scheme_traits(Scheme s)
{
    switch (s) {
    case Scheme::OmaIrs:
        return {Access::Fdma, true, true};
    case Scheme::OnlyOffIrs:
        return {Access::Noma, false, true};
    case Scheme::EfficiencyNoIrs:
        return {Access::Noma, true, false};
    case Scheme::EfficiencyIrs:
        break;
    }
    return {Access::Noma, true, true};
}

SchemeResult run_scheme(Scheme scheme, const ChannelRealization& real, const SystemConfig& cfg,
                        const SolverOptions& opts, const RandomStream& stream)
{
    const SchemeTraits traits = scheme_traits(scheme);
    const RunResult run = traits.use_irs ? alternate(real, cfg, opts, stream, traits)
                                         : alternate(real.without_irs(), cfg, opts, stream, traits);
    SchemeResult out;
    out.scheme = scheme;
    out.label = std::string(scheme_label(scheme));
    out.ee = run.ee;
    out.sum_rate = run.sum_rate;
    out.sum_power = run.sum_power;
    out.iterations = run.iterations;
    out.converged = run.converged;
    out.feasible = run.feasible;
    out.allocation = run.allocation;
    out.trace = run.trace;
    return out;
}

SchemeResult run_proposed(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                          const RandomStream& stream)
{
    return run_scheme(Scheme::EfficiencyIrs, real, cfg, opts, stream);
}

SchemeResult run_oma(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                     const RandomStream& stream)
{
    return run_scheme(Scheme::OmaIrs, real, cfg, opts, stream);
}

SchemeResult run_onlyoff(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                         const RandomStream& stream)
{
    return run_scheme(Scheme::OnlyOffIrs, real, cfg, opts, stream);
}

SchemeResult run_noirs(const ChannelRealization& real, const SystemConfig& cfg, const SolverOptions& opts,
                       const RandomStream& stream)
{
    return run_scheme(Scheme::EfficiencyNoIrs, real, cfg, opts, stream);
}

}  // namespace irsmec
