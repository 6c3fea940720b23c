#include "eitmem/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>

namespace eitmem {

namespace {

using nlohmann::json;

std::string fmt_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, std::string_view key, std::string_view condition, double got) {
    if (!ok)
        throw ConfigError("invalid configuration: " + std::string(key) + " " + std::string(condition) +
                          " (got " + fmt_value(got) + ")");
}

// Checks that `obj` is an object whose keys are all in `allowed`.
void check_section(const json& obj, std::string_view section,
                   std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object())
        throw ConfigError("invalid configuration: " +
                          (section.empty() ? std::string("document") : std::string(section)) +
                          " must be an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto k : allowed) known = known || item.key() == k;
        if (!known) {
            const std::string where = section.empty() ? item.key() : std::string(section) + "." + item.key();
            throw ConfigError("invalid configuration: unknown key '" + where + "'");
        }
    }
}

std::string dotted(std::string_view section, std::string_view key) {
    return std::string(section) + "." + std::string(key);
}

void read_number(const json& obj, std::string_view section, std::string_view key, double& out) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) return;
    if (!it->is_number())
        throw ConfigError("invalid configuration: " + dotted(section, key) + " must be a number");
    out = it->get<double>();
    if (!std::isfinite(out))
        throw ConfigError("invalid configuration: " + dotted(section, key) + " must be finite");
}

std::optional<double> read_optional(const json& obj, std::string_view section, std::string_view key) {
    if (!obj.contains(std::string(key))) return std::nullopt;
    double v = 0.0;
    read_number(obj, section, key, v);
    return v;
}

void read_bool(const json& obj, std::string_view section, std::string_view key, bool& out) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) return;
    if (!it->is_boolean())
        throw ConfigError("invalid configuration: " + dotted(section, key) + " must be true or false");
    out = it->get<bool>();
}

void read_string(const json& obj, std::string_view section, std::string_view key, std::string& out) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end()) return;
    if (!it->is_string())
        throw ConfigError("invalid configuration: " + dotted(section, key) + " must be a string");
    out = it->get<std::string>();
}

const json& section_of(const json& root, const char* name) {
    static const json empty = json::object();
    const auto it = root.find(name);
    return it == root.end() ? empty : *it;
}

RunConfig from_json(const json& root) {
    check_section(root, "", {"rates_mhz", "geometry", "probe", "control", "schedule", "numerics", "output"});
    RunConfig c;

    const json& rates = section_of(root, "rates_mhz");
    check_section(rates, "rates_mhz", {"g", "kappa", "gamma", "gamma0"});
    read_number(rates, "rates_mhz", "g", c.rates_mhz.g);
    read_number(rates, "rates_mhz", "kappa", c.rates_mhz.kappa);
    read_number(rates, "rates_mhz", "gamma", c.rates_mhz.gamma);
    read_number(rates, "rates_mhz", "gamma0", c.rates_mhz.gamma0);

    const json& geom = section_of(root, "geometry");
    check_section(geom, "geometry", {"density_cm3", "length_mm", "radius_um"});
    read_number(geom, "geometry", "density_cm3", c.geometry.density_cm3);
    read_number(geom, "geometry", "length_mm", c.geometry.length_mm);
    read_number(geom, "geometry", "radius_um", c.geometry.radius_um);

    const json& probe = section_of(root, "probe");
    check_section(probe, "probe", {"mode", "waist_um"});
    std::string mode(to_string(c.probe.mode));
    read_string(probe, "probe", "mode", mode);
    if (mode == "tem00") {
        c.probe.mode = ModeKind::TEM00;
    } else if (mode == "lg01") {
        c.probe.mode = ModeKind::LG01;
    } else {
        throw ConfigError("invalid configuration: probe.mode must be \"tem00\" or \"lg01\" (got \"" +
                          mode + "\")");
    }
    read_number(probe, "probe", "waist_um", c.probe.waist_um);

    const json& control = section_of(root, "control");
    check_section(control, "control", {"profile", "enabled"});
    std::string profile(to_string(c.control.profile));
    read_string(control, "control", "profile", profile);
    if (profile == "same-as-probe") {
        c.control.profile = ControlProfile::SameAsProbe;
    } else if (profile == "uniform") {
        c.control.profile = ControlProfile::Uniform;
    } else {
        throw ConfigError(
            "invalid configuration: control.profile must be \"same-as-probe\" or \"uniform\" (got \"" +
            profile + "\")");
    }
    read_bool(control, "control", "enabled", c.control.enabled);

    const json& sched = section_of(root, "schedule");
    check_section(sched, "schedule",
                  {"pulse_duration_us", "amplitude_write", "amplitude_read", "start_us", "write_end_us",
                   "read_start_us", "end_us"});
    auto& s = c.schedule;
    read_number(sched, "schedule", "pulse_duration_us", s.pulse_duration_us);
    read_number(sched, "schedule", "amplitude_write", s.amplitude_write);
    read_number(sched, "schedule", "amplitude_read", s.amplitude_read);
    // Omitted windows follow the duration: -5T, 5T, a 5T store gap, and 5T
    // after the read epoch.
    const double t = s.pulse_duration_us;
    s.start_us = read_optional(sched, "schedule", "start_us").value_or(-5.0 * t);
    s.write_end_us = read_optional(sched, "schedule", "write_end_us").value_or(5.0 * t);
    s.read_start_us = read_optional(sched, "schedule", "read_start_us").value_or(s.write_end_us + 5.0 * t);
    s.end_us = read_optional(sched, "schedule", "end_us")
                   .value_or(s.read_start_us + (s.read_start_us - s.write_end_us) + 5.0 * t);

    const json& num = section_of(root, "numerics");
    check_section(num, "numerics", {"n_shells", "rtol", "atol", "samples_per_kappa"});
    if (const auto it = num.find("n_shells"); it != num.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 0)
            throw ConfigError("invalid configuration: numerics.n_shells must be a non-negative integer");
        c.numerics.n_shells = it->get<std::size_t>();
    }
    read_number(num, "numerics", "rtol", c.numerics.rtol);
    read_number(num, "numerics", "atol", c.numerics.atol);
    read_number(num, "numerics", "samples_per_kappa", c.numerics.samples_per_kappa);

    const json& out = section_of(root, "output");
    check_section(out, "output", {"dir"});
    read_string(out, "output", "dir", c.output_dir);

    c.validate();
    return c;
}

}  // namespace

std::string_view to_string(ControlProfile profile) {
    return profile == ControlProfile::SameAsProbe ? "same-as-probe" : "uniform";
}

void RunConfig::validate() const {
    require(rates_mhz.g > 0.0, "rates_mhz.g", "must be > 0", rates_mhz.g);
    require(rates_mhz.kappa > 0.0, "rates_mhz.kappa", "must be > 0", rates_mhz.kappa);
    require(rates_mhz.gamma > 0.0, "rates_mhz.gamma", "must be > 0", rates_mhz.gamma);
    require(rates_mhz.gamma0 >= 0.0, "rates_mhz.gamma0", "must be >= 0", rates_mhz.gamma0);

    require(geometry.density_cm3 > 0.0, "geometry.density_cm3", "must be > 0", geometry.density_cm3);
    require(geometry.length_mm > 0.0, "geometry.length_mm", "must be > 0", geometry.length_mm);
    require(geometry.radius_um >= 0.0, "geometry.radius_um", "must be >= 0", geometry.radius_um);
    require(geometry.radius_um > 0.0, "geometry.radius_um", "must be > 0 (an empty crystal has no shells)",
            geometry.radius_um);

    require(probe.waist_um > 0.0, "probe.waist_um", "must be > 0", probe.waist_um);
    if (probe.mode == ModeKind::Uniform)
        throw ConfigError("invalid configuration: probe.mode must be \"tem00\" or \"lg01\"");

    const auto& s = schedule;
    require(s.pulse_duration_us > 0.0, "schedule.pulse_duration_us", "must be > 0", s.pulse_duration_us);
    require(s.amplitude_write > 0.0, "schedule.amplitude_write", "must be > 0", s.amplitude_write);
    require(s.amplitude_read > 0.0, "schedule.amplitude_read", "must be > 0", s.amplitude_read);
    require(s.write_end_us > s.start_us, "schedule.write_end_us", "must be > schedule.start_us",
            s.write_end_us);
    require(s.read_start_us > s.write_end_us, "schedule.read_start_us",
            "must be > schedule.write_end_us", s.read_start_us);
    require(s.end_us > s.read_start_us, "schedule.end_us", "must be > schedule.read_start_us", s.end_us);

    require(numerics.rtol >= 1e-12 && numerics.rtol <= 1e-4, "numerics.rtol", "must lie in [1e-12, 1e-4]",
            numerics.rtol);
    require(numerics.atol > 0.0, "numerics.atol", "must be > 0", numerics.atol);
    require(numerics.samples_per_kappa >= 20.0, "numerics.samples_per_kappa", "must be >= 20",
            numerics.samples_per_kappa);
    require(numerics.n_shells <= 100000, "numerics.n_shells", "must be <= 100000",
            static_cast<double>(numerics.n_shells));

    if (output_dir.empty()) throw ConfigError("invalid configuration: output.dir must not be empty");
}

SimulationConfig RunConfig::to_simulation() const {
    validate();
    SimulationConfig c;
    c.rates = SystemRates::from_mhz(rates_mhz.g, rates_mhz.kappa, rates_mhz.gamma, rates_mhz.gamma0);
    c.geometry = CrystalGeometry{geometry.density_cm3 * 1e6, geometry.length_mm * 1e-3,
                                 geometry.radius_um * 1e-6};
    c.probe = ModeProfile{probe.mode, probe.waist_um * 1e-6};
    c.control = control.profile == ControlProfile::SameAsProbe ? c.probe : ModeProfile::uniform();
    c.control_enabled = control.enabled;
    c.schedule.duration = schedule.pulse_duration_us * 1e-6;
    c.schedule.amp_write = schedule.amplitude_write;
    c.schedule.amp_read = schedule.amplitude_read;
    c.schedule.t_start = schedule.start_us * 1e-6;
    c.schedule.write_end = schedule.write_end_us * 1e-6;
    c.schedule.read_start = schedule.read_start_us * 1e-6;
    c.schedule.t_end = schedule.end_us * 1e-6;
    c.n_shells = numerics.n_shells;
    c.integrator.rtol = numerics.rtol;
    c.integrator.atol = numerics.atol;
    c.samples_per_kappa = numerics.samples_per_kappa;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return c;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    // Summary records carry the resolved configuration under "config".
    if (root.is_object() && root.contains("config") && root.contains("results")) {
        root = root["config"];
    }
    try {
        return from_json(root);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["rates_mhz"] = {{"g", c.rates_mhz.g},
                      {"kappa", c.rates_mhz.kappa},
                      {"gamma", c.rates_mhz.gamma},
                      {"gamma0", c.rates_mhz.gamma0}};
    j["geometry"] = {{"density_cm3", c.geometry.density_cm3},
                     {"length_mm", c.geometry.length_mm},
                     {"radius_um", c.geometry.radius_um}};
    j["probe"] = {{"mode", std::string(to_string(c.probe.mode))}, {"waist_um", c.probe.waist_um}};
    j["control"] = {{"profile", std::string(to_string(c.control.profile))},
                    {"enabled", c.control.enabled}};
    j["schedule"] = {{"pulse_duration_us", c.schedule.pulse_duration_us},
                     {"amplitude_write", c.schedule.amplitude_write},
                     {"amplitude_read", c.schedule.amplitude_read},
                     {"start_us", c.schedule.start_us},
                     {"write_end_us", c.schedule.write_end_us},
                     {"read_start_us", c.schedule.read_start_us},
                     {"end_us", c.schedule.end_us}};
    j["numerics"] = {{"n_shells", c.numerics.n_shells},
                     {"rtol", c.numerics.rtol},
                     {"atol", c.numerics.atol},
                     {"samples_per_kappa", c.numerics.samples_per_kappa}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

}  // namespace eitmem
