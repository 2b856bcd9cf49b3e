#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsmec {

using Position = std::array<double, 3>;

double distance(const Position& a, const Position& b);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Raised by validate() with every offending field listed in the message.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Geometry, radio, computation and algorithm parameters. All quantities are
/// stored in SI units (W, Hz, bits/s, m); dBm/dB inputs are converted on load.
struct SystemConfig {
    int users = 2;
    int ap_antennas = 4;
    int irs_elements = 16;

    Position ap_position{5.0, 0.0, 20.0};
    Position irs_position{0.0, 50.0, 2.0};
    std::vector<Position> ue_positions{{5.0, 75.0, 5.0}, {5.0, 50.0, 10.0}};

    double bandwidth_hz = 1e6;
    double noise_power_w = dbm_to_watts(-105.0);
    double reference_gain = db_to_linear(-30.0);  // G0 at 1 m
    double exponent_direct = 5.0;                 // AP-UE
    double exponent_irs_ap = 3.5;                 // AP-IRS
    double exponent_ue_irs = 2.0;                 // IRS-UE

    double power_cap_w = dbm_to_watts(31.0);
    double circuit_power_w = dbm_to_watts(23.0);
    double cycles_per_bit = 1e3;
    double capacitance = 1e-28;
    double rate_threshold_bps = 1e6;

    double tolerance = 1e-3;  // relative EE change that stops the outer loop
    int max_iterations = 20;

    // Extra path length added to every UE-IRS link, in meters. The direct
    // UE-AP link is left untouched.
    double irs_distance_offset_m = 0.0;

    /// Empty when the configuration is usable.
    [[nodiscard]] std::vector<std::string> problems() const;
    /// Throws ConfigError if problems() is non-empty.
    void validate() const;

    /// Power left for transmission and computing once the circuit is fed.
    [[nodiscard]] double power_budget_w() const { return power_cap_w - circuit_power_w; }
    [[nodiscard]] double inverse_noise() const { return 1.0 / noise_power_w; }
};

}  // namespace irsmec
