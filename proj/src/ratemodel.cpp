#include "irsmec/ratemodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace irsmec {

namespace {

double gain_of(const ChannelRealization& real, const Allocation& alloc, int k)
{
    return std::norm(composite_gain(real, k, alloc.w, alloc.m.at(k)));
}

}  // namespace

std::vector<double> channel_gains(const ChannelRealization& real, const Allocation& alloc)
{
    std::vector<double> out(real.users());
    for (int k = 0; k < real.users(); ++k) {
        out[k] = gain_of(real, alloc, k);
    }
    return out;
}

double interference(const ChannelRealization& real, const Allocation& alloc, int k)
{
    double sum = 0.0;
    const auto& order = real.sic_order();
    for (int r = 0; r < real.sic_rank(k); ++r) {
        const int i = order[r];
        sum += alloc.p[i] * gain_of(real, alloc, i);
    }
    return sum;
}

double sinr(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k, Access access)
{
    const double signal = alloc.p.at(k) * gain_of(real, alloc, k);
    if (access == Access::Fdma) {
        return signal * cfg.users / cfg.noise_power_w;
    }
    return signal / (interference(real, alloc, k) + cfg.noise_power_w);
}

double offload_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k,
                    Access access)
{
    const double band = access == Access::Fdma ? cfg.bandwidth_hz / cfg.users : cfg.bandwidth_hz;
    return band * std::log2(1.0 + sinr(real, cfg, alloc, k, access));
}

double local_rate(double f, double cycles_per_bit)
{
    return f / cycles_per_bit;
}

double total_power(const Allocation& alloc, const SystemConfig& cfg, int k)
{
    const double f = alloc.f.at(k);
    return alloc.p.at(k) + cfg.capacitance * f * f * f + cfg.circuit_power_w;
}

double sum_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, Access access)
{
    double total = 0.0;
    for (int k = 0; k < real.users(); ++k) {
        total += offload_rate(real, cfg, alloc, k, access) + local_rate(alloc.f[k], cfg.cycles_per_bit);
    }
    return total;
}

double sum_power(const Allocation& alloc, const SystemConfig& cfg)
{
    double total = 0.0;
    for (int k = 0; k < alloc.users(); ++k) {
        total += total_power(alloc, cfg, k);
    }
    return total;
}

double energy_efficiency(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                         Access access)
{
    return sum_rate(real, cfg, alloc, access) / sum_power(alloc, cfg);
}

double effective_gain(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc, int k)
{
    return gain_of(real, alloc, k) / cfg.noise_power_w;
}

double lemma1_update(double x)
{
    if (!(x > 0.0)) {
        throw NumericDomainError("lemma1_update: x must be positive, got " + std::to_string(x));
    }
    return 1.0 / x;
}

double lemma1_phi(double t, double x)
{
    return -t * x + std::log(t) + 1.0;
}

double surrogate_rate(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                      const AuxState& aux, int k)
{
    const double a0 = cfg.inverse_noise();
    const double before = a0 * interference(real, alloc, k);
    const double upto = before + a0 * alloc.p.at(k) * gain_of(real, alloc, k);
    return cfg.bandwidth_hz / std::numbers::ln2 * (std::log(upto + 1.0) + lemma1_phi(aux.t.at(k), before + 1.0));
}

std::vector<double> tight_multipliers(const ChannelRealization& real, const SystemConfig& cfg,
                                      const Allocation& alloc, Access access)
{
    std::vector<double> t(real.users(), 1.0);
    if (access == Access::Noma) {
        const double a0 = cfg.inverse_noise();
        for (int k = 0; k < real.users(); ++k) {
            t[k] = lemma1_update(a0 * interference(real, alloc, k) + 1.0);
        }
    }
    return t;
}

double GainScore::min_slack() const
{
    return slack.empty() ? 0.0 : *std::min_element(slack.begin(), slack.end());
}

GainScore score_gains(const SystemConfig& cfg, const std::vector<int>& order, const std::vector<double>& p,
                      const std::vector<double>& f, const std::vector<double>& gains, const AuxState& aux,
                      Access access)
{
    const int users = static_cast<int>(p.size());
    const double a0 = cfg.inverse_noise();
    const double scale = cfg.bandwidth_hz / std::numbers::ln2;

    GainScore score;
    score.slack.assign(users, 0.0);
    double local = 0.0;
    double power = 0.0;
    for (int k = 0; k < users; ++k) {
        local += local_rate(f[k], cfg.cycles_per_bit);
        power += p[k] + cfg.capacitance * f[k] * f[k] * f[k] + cfg.circuit_power_w;
    }

    double offload = 0.0;
    if (access == Access::Noma) {
        double before = 0.0;
        for (int k : order) {
            const double upto = before + a0 * p[k] * gains[k];
            score.slack[k] = scale * (std::log(upto + 1.0) + lemma1_phi(aux.t[k], before + 1.0)) +
                             local_rate(f[k], cfg.cycles_per_bit) - cfg.rate_threshold_bps;
            before = upto;
        }
        offload = scale * std::log1p(before);
    } else {
        for (int k = 0; k < users; ++k) {
            const double rate = scale / users * std::log1p(users * a0 * p[k] * gains[k]);
            offload += rate;
            score.slack[k] = rate + local_rate(f[k], cfg.cycles_per_bit) - cfg.rate_threshold_bps;
        }
    }
    score.objective = offload + local - aux.eta1 * power;
    return score;
}

GainScore score_allocation(const ChannelRealization& real, const SystemConfig& cfg, const Allocation& alloc,
                           const AuxState& aux, Access access)
{
    return score_gains(cfg, real.sic_order(), alloc.p, alloc.f, channel_gains(real, alloc), aux, access);
}

}  // namespace irsmec
