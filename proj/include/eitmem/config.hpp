#pragma once

// Run configuration in laboratory units (MHz as omega/2pi, cm^-3, mm, um, us),
// converted once to the SI + rad/s SimulationConfig used internally.
//
// JSON layout (every key optional, unknown keys rejected):
//   rates_mhz { g, kappa, gamma, gamma0 }
//   geometry  { density_cm3, length_mm, radius_um }
//   probe     { mode: "tem00" | "lg01", waist_um }
//   control   { profile: "same-as-probe" | "uniform", enabled }
//   schedule  { pulse_duration_us, amplitude_write, amplitude_read,
//               start_us, write_end_us, read_start_us, end_us }
//   numerics  { n_shells (0 = auto), rtol, atol, samples_per_kappa }
//   output    { dir }

#include "eitmem/dynamics.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace eitmem {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ControlProfile { SameAsProbe, Uniform };

struct RunConfig {
    struct Rates {
        double g = 0.37;
        double kappa = 1.5;
        double gamma = 11.3;
        double gamma0 = 0.0;
        bool operator==(const Rates&) const = default;
    } rates_mhz;

    struct Geometry {
        double density_cm3 = 6.1e8;
        double length_mm = 3.0;
        double radius_um = 100.0;
        bool operator==(const Geometry&) const = default;
    } geometry;

    struct Probe {
        ModeKind mode = ModeKind::TEM00;
        double waist_um = 37.0;
        bool operator==(const Probe&) const = default;
    } probe;

    struct Control {
        ControlProfile profile = ControlProfile::Uniform;
        bool enabled = true;
        bool operator==(const Control&) const = default;
    } control;

    struct Schedule {
        double pulse_duration_us = 2.0;
        double amplitude_write = 1.0;
        double amplitude_read = 1.0;
        double start_us = -10.0;
        double write_end_us = 10.0;
        double read_start_us = 20.0;
        double end_us = 40.0;
        bool operator==(const Schedule&) const = default;
    } schedule;

    struct Numerics {
        std::size_t n_shells = 0;
        double rtol = 1.0e-9;
        double atol = 1.0e-11;
        double samples_per_kappa = 40.0;
        bool operator==(const Numerics&) const = default;
    } numerics;

    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;

    SimulationConfig to_simulation() const;
    /// Checks every field against the owning module's preconditions.
    void validate() const;
};

std::string_view to_string(ControlProfile profile);

/// Parses a config document (or a summary record carrying a "config" member).
/// `source` names the origin in error messages.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses `path`; errors name the path.
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration as a JSON document (reloads to an equal RunConfig).
nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace eitmem
