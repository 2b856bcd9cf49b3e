#include "irsmec/config_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>

namespace irsmec {

namespace {

using nlohmann::json;

double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1000.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Collects every problem in a section instead of stopping at the first.
class Reader {
public:
    Reader(const json& section, std::string name, std::vector<std::string>& problems)
        : section_(section), name_(std::move(name)), problems_(problems)
    {
        if (!section_.is_object()) {
            problems_.push_back(name_ + " must be an object");
        }
    }

    template <typename T>
    void read(const std::string& key, T& target)
    {
        seen_.insert(key);
        if (!section_.is_object() || !section_.contains(key)) {
            return;
        }
        try {
            target = section_.at(key).get<T>();
        } catch (const json::exception&) {
            problems_.push_back(name_ + "." + key + " has the wrong type");
        }
    }

    void read_converted(const std::string& key, double& target, const std::function<double(double)>& convert)
    {
        double raw = 0.0;
        bool present = section_.is_object() && section_.contains(key);
        read(key, raw);
        if (present) {
            target = convert(raw);
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return section_.is_object() && section_.contains(key); }

    void finish()
    {
        if (!section_.is_object()) {
            return;
        }
        for (const auto& [key, value] : section_.items()) {
            if (!seen_.count(key)) {
                problems_.push_back(name_ + "." + key + " is not a recognised field");
            }
        }
    }

private:
    const json& section_;
    std::string name_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

void read_system(const json& doc, SystemConfig& cfg, std::vector<std::string>& problems)
{
    Reader r(doc, "system", problems);
    r.read("users", cfg.users);
    r.read("ap_antennas", cfg.ap_antennas);
    r.read("irs_elements", cfg.irs_elements);
    r.read("ap_position", cfg.ap_position);
    r.read("irs_position", cfg.irs_position);
    const bool users_given = r.has("users");
    r.read("ue_positions", cfg.ue_positions);
    if (!users_given && r.has("ue_positions")) {
        cfg.users = static_cast<int>(cfg.ue_positions.size());
    }
    r.read("bandwidth_hz", cfg.bandwidth_hz);
    r.read_converted("noise_dbm", cfg.noise_power_w, dbm_to_watts);
    r.read_converted("reference_gain_db", cfg.reference_gain, db_to_linear);
    r.read("exponent_direct", cfg.exponent_direct);
    r.read("exponent_irs_ap", cfg.exponent_irs_ap);
    r.read("exponent_ue_irs", cfg.exponent_ue_irs);
    r.read_converted("power_cap_dbm", cfg.power_cap_w, dbm_to_watts);
    r.read_converted("circuit_power_dbm", cfg.circuit_power_w, dbm_to_watts);
    r.read("cycles_per_bit", cfg.cycles_per_bit);
    r.read("capacitance", cfg.capacitance);
    r.read("rate_threshold_bps", cfg.rate_threshold_bps);
    r.read("tolerance", cfg.tolerance);
    r.read("max_iterations", cfg.max_iterations);
    r.read("irs_distance_offset_m", cfg.irs_distance_offset_m);
    r.finish();
}

void read_solver(const json& doc, SolverOptions& opts, std::vector<std::string>& problems)
{
    Reader r(doc, "solver", problems);
    r.read("tol", opts.tol);
    r.read("max_newton", opts.max_newton);
    r.read("mu0", opts.mu0);
    r.read("shrink", opts.shrink);
    r.read("randomizations", opts.randomizations);
    r.read("rank_one_threshold", opts.rank_one_threshold);
    r.finish();
}

void read_experiment(const json& doc, ExperimentSpec& spec, std::vector<std::string>& problems)
{
    Reader r(doc, "experiment", problems);
    std::string sweep(sweep_label(spec.sweep));
    r.read("sweep", sweep);
    if (sweep == "rth") {
        spec.sweep = SweepVariable::RateThreshold;
    } else if (sweep == "irs_distance") {
        spec.sweep = SweepVariable::IrsDistance;
    } else if (sweep == "none") {
        spec.sweep = SweepVariable::None;
    } else {
        problems.push_back("experiment.sweep must be one of none, rth, irs_distance");
    }
    r.read("grid", spec.grid);
    r.read("seeds", spec.seeds);
    std::vector<std::string> labels;
    const bool schemes_given = r.has("schemes");
    r.read("schemes", labels);
    if (schemes_given) {
        spec.schemes.clear();
        for (const auto& label : labels) {
            if (auto s = scheme_from_label(label)) {
                spec.schemes.push_back(*s);
            } else {
                problems.push_back("experiment.schemes contains unknown scheme '" + label + "'");
            }
        }
    }
    r.read("output_dir", spec.output_dir);
    r.read("threads", spec.threads);
    r.read("max_infeasible_fraction", spec.max_infeasible_fraction);
    r.finish();
}

}  // namespace

ExperimentSpec spec_from_json(const json& doc)
{
    ExperimentSpec spec;
    std::vector<std::string> problems;
    if (!doc.is_object()) {
        throw ConfigError({"configuration must be a JSON object"});
    }
    static const std::set<std::string> sections{"system", "solver", "experiment"};
    for (const auto& [key, value] : doc.items()) {
        if (!sections.count(key)) {
            problems.push_back(key + " is not a recognised section");
        }
    }
    if (doc.contains("system")) {
        read_system(doc.at("system"), spec.base, problems);
    }
    if (doc.contains("solver")) {
        read_solver(doc.at("solver"), spec.solver, problems);
    }
    if (doc.contains("experiment")) {
        read_experiment(doc.at("experiment"), spec, problems);
    }
    for (auto& p : spec.problems()) {
        problems.push_back(std::move(p));
    }
    if (!problems.empty()) {
        throw ConfigError(std::move(problems));
    }
    return spec;
}

ExperimentSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open configuration file: " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path + ": " + e.what()});
    }
    return spec_from_json(doc);
}

json spec_to_json(const ExperimentSpec& spec)
{
    const SystemConfig& c = spec.base;
    json system{
        {"users", c.users},
        {"ap_antennas", c.ap_antennas},
        {"irs_elements", c.irs_elements},
        {"ap_position", c.ap_position},
        {"irs_position", c.irs_position},
        {"ue_positions", c.ue_positions},
        {"bandwidth_hz", c.bandwidth_hz},
        {"noise_dbm", watts_to_dbm(c.noise_power_w)},
        {"reference_gain_db", linear_to_db(c.reference_gain)},
        {"exponent_direct", c.exponent_direct},
        {"exponent_irs_ap", c.exponent_irs_ap},
        {"exponent_ue_irs", c.exponent_ue_irs},
        {"power_cap_dbm", watts_to_dbm(c.power_cap_w)},
        {"circuit_power_dbm", watts_to_dbm(c.circuit_power_w)},
        {"cycles_per_bit", c.cycles_per_bit},
        {"capacitance", c.capacitance},
        {"rate_threshold_bps", c.rate_threshold_bps},
        {"tolerance", c.tolerance},
        {"max_iterations", c.max_iterations},
        {"irs_distance_offset_m", c.irs_distance_offset_m},
    };
    const SolverOptions& s = spec.solver;
    json solver{
        {"tol", s.tol},
        {"max_newton", s.max_newton},
        {"mu0", s.mu0},
        {"shrink", s.shrink},
        {"randomizations", s.randomizations},
        {"rank_one_threshold", s.rank_one_threshold},
    };
    std::vector<std::string> labels;
    for (Scheme sc : spec.schemes) {
        labels.emplace_back(scheme_label(sc));
    }
    json experiment{
        {"sweep", std::string(sweep_label(spec.sweep))},
        {"grid", spec.grid},
        {"seeds", spec.seeds},
        {"schemes", labels},
        {"output_dir", spec.output_dir},
        {"threads", spec.threads},
        {"max_infeasible_fraction", spec.max_infeasible_fraction},
    };
    return json{{"system", system}, {"solver", solver}, {"experiment", experiment}};
}

}  // namespace irsmec
