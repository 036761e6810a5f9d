#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sov/model.hpp"

namespace sov::cli {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "a+bi", "a-bi", "bi", "a", "i", "-i"
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

struct ScenarioConfig {
    std::string name;
    ModelSpec model;
    unsigned long long seed = 11;
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;  // defaults merged with overrides
    std::string out_dir = ".";
    bool csv = false;
    std::vector<double> limit_epsilons{1e-2, 1e-3, 1e-4};
    cplx limit_lambda{0.37, 0.21};
    std::map<std::string, std::map<std::string, std::string>> echo;  // section -> key -> raw value
};

const std::vector<std::string>& known_checks();
const std::map<std::string, double>& default_tolerances();

// throws ConfigError on syntax errors, unknown keys or an invalid model
ScenarioConfig parse_config(const std::string& text, const std::string& name);
ScenarioConfig load_config(const std::string& path_or_preset);

struct Preset {
    std::string name;
    std::string description;
    std::string text;
};
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

enum class Status { pass, fail, anomaly, not_applicable };
std::string status_name(Status s);

struct ScenarioResult {
    nlohmann::json report;  // timings under "timings"
    std::string csv;        // empty without CSV output
    int exit_code = 0;      // 0 all pass (anomaly and not-applicable allowed), 2 any fail
};
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// writes <out>/<name>.json (and <name>_tq.csv); returns the exit code
int run_and_write(const ScenarioConfig& cfg);

// entry point of the command-line tool
int main_entry(int argc, char** argv);

}  // namespace sov::cli
