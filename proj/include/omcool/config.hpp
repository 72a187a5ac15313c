#pragma once

// Run configuration: an INI file with top-level keys (task, fidelity, units)
// and sections [mode_a] [mode_b] [cavity] [coupling] [grid] [spectrum]
// [sweep] [optimize] [design] [sense] [output]. Frequencies and rates are in
// hertz unless units = rad_s; they are stored in rad/s.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omcool/design.hpp"
#include "omcool/model.hpp"
#include "omcool/spectral.hpp"
#include "omcool/units.hpp"

namespace omcool {

enum class Task { spectrum, sweep, optimize, design, sense };
enum class OutputFormat { csv, json };
enum class FrequencyUnits { hz, rad_s };
enum class DriveInput { alpha, pump };

std::string_view task_name(Task t);
std::optional<Task> parse_task(std::string_view text);

struct SpectrumTask {
    std::string mode = "a";
    bool fit = true;
    std::optional<double> fit_halfwidth;  // rad/s; default 10 linewidths

    bool operator==(const SpectrumTask&) const = default;
};

struct SweepTask {
    enum class Axis { c_om, detuning };
    Axis axis = Axis::c_om;
    double c_om_min = 1e-2;
    double c_om_max = 1e3;
    int points_per_decade = 60;
    std::vector<double> c_om_values;  // overrides the log axis when non-empty
    std::vector<double> detunings;    // rad/s
    double c_om = 1.0;                // fixed C_OM on the detuning axis
    bool optimize = false;            // per-point optimum on the detuning axis

    bool operator==(const SweepTask&) const = default;
};

struct OptimizeTask {
    double c_om_min = 1e-2;
    double c_om_max = 1e3;

    bool operator==(const OptimizeTask&) const = default;
};

struct DesignTask {
    BeamGeometry geometry{20e-6, 20e-6, 0.3e-6, 0.5e-6};
    double temperature = 300.0;
    std::string material = "silicon_nitride";
    std::string material_file;  // as written; resolved against base_dir
    double clamping_calibration = default_clamping_calibration();
    double kappa = kTwoPi * 1e5;  // rad/s, cavity attached to the designed system

    bool operator==(const DesignTask&) const = default;
};

struct SenseTask {
    std::optional<double> c_om;  // default sqrt(1 + C_ab)
    double span_linewidths = 10.0;
    int points = 401;

    bool operator==(const SenseTask&) const = default;
};

struct RunConfig {
    Task task = Task::spectrum;
    Fidelity fidelity = Fidelity::rwa;
    bool has_system = false;
    SystemSpec system;
    DriveInput drive_input = DriveInput::alpha;
    GridOptions grid;
    SpectrumTask spectrum;
    SweepTask sweep;
    OptimizeTask optimize;
    DesignTask design;
    SenseTask sense;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    std::filesystem::path base_dir;  // directory of the config file, for relative paths

    bool operator==(const RunConfig&) const = default;
};

// Parses and validates a configuration. `task_override` is the CLI
// subcommand; when both are present they must agree.
RunConfig parse_config(const std::string& text, std::optional<Task> task_override = std::nullopt,
                       const std::filesystem::path& base_dir = {});

// Canonical INI text (units = rad_s) that parses back to an equal RunConfig.
std::string to_ini(const RunConfig& config);

}  // namespace omcool
