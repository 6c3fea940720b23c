#include "eitmem/config.hpp"
#include "eitmem/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

using namespace eitmem;
namespace fs = std::filesystem;

namespace {

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

fs::path scratch_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / ("eitmem_test_" + std::string(name));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty document gives the reference parameters") {
    const RunConfig c = parse_config("{}");
    CHECK(c == RunConfig{});
    const SimulationConfig s = c.to_simulation();
    const SimulationConfig ref;
    CHECK(s.rates.g == doctest::Approx(ref.rates.g).epsilon(1e-15));
    CHECK(s.rates.kappa == doctest::Approx(2.0 * kPi * 1.5e6));
    CHECK(s.geometry.rho == doctest::Approx(6.1e14));
    CHECK(s.geometry.length == doctest::Approx(3e-3));
    CHECK(s.geometry.radius == doctest::Approx(100e-6));
    CHECK(s.probe == ModeProfile::tem00(37e-6));
    CHECK(s.control.is_uniform());
    CHECK(s.schedule.duration == doctest::Approx(2e-6));
    CHECK(s.schedule.t_start == doctest::Approx(ref.schedule.t_start));
    CHECK(s.schedule.write_end == doctest::Approx(ref.schedule.write_end));
    CHECK(s.schedule.read_start == doctest::Approx(ref.schedule.read_start));
    CHECK(s.schedule.t_end == doctest::Approx(ref.schedule.t_end));
    CHECK(s.n_shells == 0);
    CHECK(s.resolved_shells() == ref.resolved_shells());
}

TEST_CASE("empty numerics section applies defaults") {
    const RunConfig c = parse_config(R"({"numerics": {}})");
    CHECK(c.numerics == RunConfig::Numerics{});
}

TEST_CASE("windows follow the pulse duration") {
    const RunConfig c = parse_config(R"({"schedule": {"pulse_duration_us": 3}})");
    CHECK(c.schedule.start_us == doctest::Approx(-15.0));
    CHECK(c.schedule.write_end_us == doctest::Approx(15.0));
    CHECK(c.schedule.read_start_us == doctest::Approx(30.0));
    CHECK(c.schedule.end_us == doctest::Approx(60.0));
    const RunConfig d = parse_config(R"({"schedule": {"read_start_us": 40}})");
    CHECK(d.schedule.read_start_us == 40.0);
    CHECK(d.schedule.end_us == doctest::Approx(40.0 + 30.0 + 10.0));
}

TEST_CASE("finite-waist control and probe mode") {
    const RunConfig c =
        parse_config(R"({"probe": {"mode": "lg01", "waist_um": 30}, "control": {"profile": "same-as-probe"}})");
    const SimulationConfig s = c.to_simulation();
    CHECK(s.probe.kind == ModeKind::LG01);
    CHECK(s.probe.waist == doctest::Approx(30e-6));
    CHECK(s.control == s.probe);
}

TEST_CASE("validation errors name the key") {
    CHECK(contains(error_of(R"({"geometry": {"radius_um": -1}})"), "geometry.radius_um must be >= 0"));
    CHECK(contains(error_of(R"({"rates_mhz": {"kappa": 0}})"), "rates_mhz.kappa"));
    CHECK(contains(error_of(R"({"numerics": {"rtol": 1e-2}})"), "numerics.rtol"));
    CHECK(contains(error_of(R"({"numerics": {"samples_per_kappa": 5}})"), "numerics.samples_per_kappa"));
    CHECK(contains(error_of(R"({"numerics": {"n_shells": -3}})"), "numerics.n_shells"));
    CHECK(contains(error_of(R"({"schedule": {"amplitude_write": 0}})"), "schedule.amplitude_write"));
    CHECK(contains(error_of(R"({"schedule": {"write_end_us": -20}})"), "schedule.write_end_us"));
    CHECK(contains(error_of(R"({"probe": {"mode": "uniform"}})"), "probe.mode"));
    CHECK(contains(error_of(R"({"control": {"profile": "wide"}})"), "control.profile"));
}

TEST_CASE("unknown keys and wrong types are rejected") {
    CHECK(contains(error_of(R"({"geometry": {"radius": 5}})"), "unknown key 'geometry.radius'"));
    CHECK(contains(error_of(R"({"extras": {}})"), "unknown key 'extras'"));
    CHECK(contains(error_of(R"({"geometry": {"radius_um": "big"}})"), "geometry.radius_um must be a number"));
    CHECK(contains(error_of(R"({"control": {"enabled": 1}})"), "control.enabled"));
    CHECK(contains(error_of(R"({"geometry": 3})"), "geometry must be an object"));
    CHECK(contains(error_of(R"([1, 2])"), "must be an object"));
}

TEST_CASE("parse errors carry the position") {
    const std::string e = error_of("{\n  \"geometry\": {\"radius_um\": 1,}\n}");
    CHECK(contains(e, "line 2"));
}

TEST_CASE("missing file names the path") {
    try {
        load_config("/nonexistent/dir/run.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(contains(e.what(), "/nonexistent/dir/run.json"));
    }
}

TEST_CASE("configuration round-trips through JSON and summary records") {
    RunConfig c;
    c.rates_mhz.g = 0.41;
    c.rates_mhz.gamma0 = 1e-3;
    c.geometry.density_cm3 = 5.5e8;
    c.geometry.length_mm = 1.7;
    c.geometry.radius_um = 33.3;
    c.probe.mode = ModeKind::LG01;
    c.probe.waist_um = 0.1 + 0.2;  // not exactly representable
    c.control.profile = ControlProfile::SameAsProbe;
    c.control.enabled = false;
    c.schedule.pulse_duration_us = 1.25;
    c.schedule.amplitude_write = 2.45;
    c.schedule.amplitude_read = 1.0 / 3.0;
    c.schedule.start_us = -7.0;
    c.schedule.write_end_us = 6.0;
    c.schedule.read_start_us = 13.0;
    c.schedule.end_us = 26.5;
    c.numerics.n_shells = 77;
    c.numerics.rtol = 3e-10;
    c.numerics.atol = 1e-13;
    c.numerics.samples_per_kappa = 64;
    c.output_dir = "results/run 1";

    CHECK(parse_config(to_json(c).dump()) == c);
    CHECK(parse_config(dump_exact(to_json(c))) == c);

    nlohmann::ordered_json summary;
    summary["format"] = "eitmem-summary";
    summary["command"] = "simulate";
    summary["config"] = to_json(c);
    summary["results"] = {{"eta_tot", 0.5}};
    const fs::path dir = scratch_dir("roundtrip");
    write_file_atomic(dir / "summary.json", dump_exact(summary));
    CHECK(load_config(dir / "summary.json") == c);
    fs::remove_all(dir);
}

TEST_CASE("to_json is fully resolved") {
    const auto j = to_json(parse_config("{}"));
    for (const char* section : {"rates_mhz", "geometry", "probe", "control", "schedule", "numerics", "output"})
        CHECK(j.contains(section));
    CHECK(j["schedule"]["end_us"].get<double>() == doctest::Approx(40.0));
}

}  // TEST_SUITE
