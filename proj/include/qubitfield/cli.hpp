#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qubitfield::cli {

using nlohmann::json;

/// Bad config or usage; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

struct ModeConfig {
    double amplitude = 0.0;
    double wavenumber = 0.0;
    int direction = 1;
    double phase = 0.0;
};

struct ScenarioConfig {
    unsigned long long seed = 0;
    unsigned threads = 0;
    int n = 4; ///< matrix dimension N

    int nt = 64;
    int nx = 64;
    double dx = 1.0 / 64;
    double dt = 1.0 / 128;
    /// empty: standing wave 0.5 cos(2 pi x / L) cos(2 pi t / L)
    std::vector<ModeConfig> modes;

    double tol_algebra = 1e-12;
    double tol_identity = 1e-10;
    double tol_entanglement = 1e-8;
    double order_min = 1.8;
    double order_max = 2.2;

    // verify-algebra
    int conjugates = 20;
    int samples = 40;
    std::optional<std::string> triple_fixture;

    // classify
    std::array<double, 6> lambda{1, 0, 0, 0, 0, 0};
    double mu = 0.0;

    // simulate
    int steps = 200;
    double sim_mu = 0.0;
    int wave_modes = 3;
    std::string initial = "plane_wave";
    std::optional<std::string> csv;
    std::vector<int> refinements{64, 128, 256};

    // diagnose
    std::string preset = "maximally-mixed";
    std::array<double, 3> bloch{0, 0, 1};
    std::optional<std::string> snapshot;
    std::optional<std::array<int, 2>> probe; ///< default: (3 nt / 8, nx / 8)
};

/// Parses a JSON config; unknown keys and wrong types throw ConfigError.
ScenarioConfig parse_config(const json& j);
ScenarioConfig load_config(const std::string& path);
json config_to_json(const ScenarioConfig& c);

struct Report {
    std::string command;
    json config;
    json conventions;
    json checks = json::array();
    json conflicts = json::array();
    json results = json::object();

    void check(const std::string& name, double value, double threshold, bool pass);
    void conflict(const std::string& name, const json& paper, const json& computed, bool flag);
    bool pass() const;
    /// The deterministic part (no timing).
    json body() const;
};

/// Fixed conventions shared by every report.
json conventions();

Report cmd_verify_algebra(const ScenarioConfig& c);
Report cmd_structure_constants(const ScenarioConfig& c);
Report cmd_classify(const ScenarioConfig& c);
Report cmd_simulate(const ScenarioConfig& c);
Report cmd_diagnose(const ScenarioConfig& c);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

} // namespace qubitfield::cli
