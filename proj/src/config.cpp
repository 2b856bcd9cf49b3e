#include "irsmec/config.hpp"

#include <cmath>
#include <sstream>

namespace irsmec {

namespace {

std::string join(const std::vector<std::string>& parts)
{
    std::ostringstream out;
    out << "invalid configuration:";
    for (const auto& p : parts) {
        out << "\n  - " << p;
    }
    return out.str();
}

}  // namespace

double distance(const Position& a, const Position& b)
{
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument(join(problems)), problems_(std::move(problems))
{
}

std::vector<std::string> SystemConfig::problems() const
{
    std::vector<std::string> out;
    auto check = [&out](bool ok, const char* message) {
        if (!ok) {
            out.emplace_back(message);
        }
    };
    check(users >= 1, "users must be >= 1");
    check(ap_antennas >= 1, "ap_antennas must be >= 1");
    check(irs_elements >= 0, "irs_elements must be >= 0");
    check(static_cast<int>(ue_positions.size()) == users, "ue_positions must have one entry per user");
    check(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
    check(noise_power_w > 0.0, "noise power must be > 0");
    check(reference_gain > 0.0, "reference gain must be > 0");
    check(exponent_direct > 0.0, "exponent_direct must be > 0");
    check(exponent_irs_ap > 0.0, "exponent_irs_ap must be > 0");
    check(exponent_ue_irs > 0.0, "exponent_ue_irs must be > 0");
    check(power_cap_w > 0.0, "power cap must be > 0");
    check(circuit_power_w > 0.0, "circuit power must be > 0");
    check(power_cap_w > circuit_power_w, "power cap must exceed circuit power");
    check(cycles_per_bit > 0.0, "cycles_per_bit must be > 0");
    check(capacitance > 0.0, "capacitance must be > 0");
    check(rate_threshold_bps >= 0.0, "rate_threshold_bps must be >= 0");
    check(tolerance > 0.0 && tolerance < 1.0 + 1e-12, "tolerance must lie in (0, 1]");
    check(max_iterations >= 1, "max_iterations must be >= 1");
    check(irs_distance_offset_m >= 0.0, "irs_distance_offset_m must be >= 0");
    return out;
}

void SystemConfig::validate() const
{
    auto p = problems();
    if (!p.empty()) {
        throw ConfigError(std::move(p));
    }
}

}  // namespace irsmec
