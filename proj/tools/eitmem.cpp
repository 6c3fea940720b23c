// eitmem: write-store-read simulations, amplitude optimization, sweeps and
// property checks from the command line.

#include "eitmem/config.hpp"
#include "eitmem/experiments.hpp"
#include "eitmem/kernels.hpp"
#include "eitmem/output.hpp"
#include "eitmem/validate.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using namespace eitmem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    bool seedless = false;
};

struct SweepArgs {
    std::string r_over_wp = "0.1:3.0:0.1";
    std::string l_mm = "1:5:1";
    std::string mode;
    std::string control = "both";
};

struct Range {
    double first, last, step;
};

Range parse_range(const std::string& text, const char* flag) {
    Range r{};
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.first, &r.last, &r.step, &tail) == 3 && r.step > 0.0 &&
        r.last >= r.first)
        return r;
    double single = 0.0;
    if (std::sscanf(text.c_str(), "%lf%c", &single, &tail) == 1) return {single, single, 1.0};
    throw std::invalid_argument(std::string(flag) + ": expected start:stop:step with step > 0, got '" + text + "'");
}

std::vector<double> expand(const Range& r) { return radius_grid(1.0, r.first, r.last, r.step); }

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    cfg.validate();
    return cfg;
}

ordered_json summary_header(const std::string& command, const RunConfig& cfg) {
    ordered_json j;
    j["format"] = "eitmem-summary";
    j["format_version"] = 1;
    j["command"] = command;
    j["kernel"] = std::string(kernels::active_kernel().name);
    j["config"] = to_json(cfg);
    return j;
}

void write_summary(const RunConfig& cfg, const std::string& command, ordered_json results) {
    ordered_json doc = summary_header(command, cfg);
    doc["results"] = std::move(results);
    const fs::path path = fs::path(cfg.output_dir) / (command + "_summary.json");
    write_file_atomic(path, dump_exact(doc));
    std::cout << "wrote " << path.string() << "\n";
}

void write_table(const RunConfig& cfg, const std::string& name, const std::string& content) {
    const fs::path path = fs::path(cfg.output_dir) / name;
    write_file_atomic(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

ControlConfig control_of(const RunConfig& cfg) {
    return cfg.control.profile == ControlProfile::SameAsProbe ? ControlConfig::FiniteWaist
                                                              : ControlConfig::Extended;
}

std::vector<ControlConfig> controls_for(const std::string& name) {
    if (name == "both") return {ControlConfig::Extended, ControlConfig::FiniteWaist};
    return {parse_control_config(name)};
}

void print_efficiencies(const char* label, double eta_w, double eta_r, double eta_tot) {
    std::printf("%seta_w = %.6f  eta_r = %.6f  eta_tot = %.6f\n", label, eta_w, eta_r, eta_tot);
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig cfg = resolve_config(args);
    const SimulationResult r = run_sequence(cfg.to_simulation());
    write_table(cfg, "time_series.csv", time_series_csv(r));
    write_table(cfg, "shell_snapshot.csv", shell_snapshot_csv(r));
    write_summary(cfg, "simulate", result_json(r));
    for (const auto& w : r.diagnostics.warnings) std::cerr << "warning: " << w << "\n";
    print_efficiencies("", r.eta_w, r.eta_r, r.eta_tot);
    std::printf("N_eff = %.2f  C = %.4f  norm residual = %.3e\n", r.n_eff, r.cooperativity,
                r.diagnostics.norm_residual);
    return 0;
}

int cmd_optimize(const CommonArgs& args, const AmplitudeSearch& search) {
    const RunConfig cfg = resolve_config(args);
    const AmplitudeOptimum opt = optimize_amplitude(cfg.to_simulation(), search);
    ordered_json res;
    res["control_config"] = std::string(to_string(control_of(cfg)));
    res["a_opt"] = opt.a_opt;
    res["eta_w"] = opt.eta_w;
    res["eta_r"] = opt.eta_r;
    res["eta_tot"] = opt.eta_tot;
    res["n_eff"] = opt.n_eff;
    res["cooperativity"] = opt.cooperativity;
    res["n_shells"] = opt.n_shells;
    res["evaluations"] = opt.evaluations;
    res["search"] = {{"lo", search.lo}, {"hi", search.hi}, {"tol", search.tol}};
    res["at_bound"] = opt.at_bound;
    res["warnings"] = opt.warnings;
    write_summary(cfg, "optimize", res);
    for (const auto& w : opt.warnings) std::cerr << "warning: " << w << "\n";
    std::printf("A_opt = %.4f  ", opt.a_opt);
    print_efficiencies("", opt.eta_w, opt.eta_r, opt.eta_tot);
    return 0;
}

int report_rows(const RunConfig& cfg, const std::string& command, const std::string& table,
                const std::vector<SweepRow>& rows, ordered_json extra) {
    write_table(cfg, table, sweep_csv(rows));
    std::size_t failed = 0;
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
        list.push_back(sweep_row_json(row));
        if (!row.ok()) ++failed;
    }
    extra["rows"] = std::move(list);
    extra["failed_rows"] = failed;
    write_summary(cfg, command, std::move(extra));
    if (failed > 0) {
        std::cerr << failed << " of " << rows.size() << " sweep points failed; see the status column\n";
        return 1;
    }
    return 0;
}

int cmd_sweep_radius(const CommonArgs& args, const SweepArgs& sweep, const AmplitudeSearch& search) {
    RunConfig cfg = resolve_config(args);
    if (!sweep.mode.empty()) cfg.probe.mode = parse_mode_kind(sweep.mode);
    cfg.validate();
    const SimulationConfig base = cfg.to_simulation();
    const std::vector<double> ratios = expand(parse_range(sweep.r_over_wp, "--r-over-wp"));
    std::vector<double> radii;
    for (double k : ratios) radii.push_back(k * base.probe.waist);

    const SweepOptions opts{search, args.workers};
    std::vector<SweepRow> rows;
    ordered_json extra;
    extra["r_over_wp"] = ratios;
    for (ControlConfig kind : controls_for(sweep.control)) {
        const auto part = sweep_radius(base, kind, radii, opts);
        const std::size_t best = argmax_eta(part);
        std::printf("%s %s: peak eta_tot = %.5f at R = %.2f um (R/w_p = %.3f), A_opt = %.3f\n",
                    std::string(to_string(cfg.probe.mode)).c_str(), std::string(to_string(kind)).c_str(),
                    part[best].eta_tot, part[best].R_um, part[best].R_um / cfg.probe.waist_um,
                    part[best].a_opt);
        extra["peaks"].push_back(sweep_row_json(part[best]));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return report_rows(cfg, "sweep_radius", "sweep_radius.csv", rows, std::move(extra));
}

int cmd_sweep_grid(const CommonArgs& args, const SweepArgs& sweep, const AmplitudeSearch& search) {
    RunConfig cfg = resolve_config(args);
    if (!sweep.mode.empty()) cfg.probe.mode = parse_mode_kind(sweep.mode);
    cfg.validate();
    const SimulationConfig base = cfg.to_simulation();
    const std::vector<double> ratios = expand(parse_range(sweep.r_over_wp, "--r-over-wp"));
    const std::vector<double> lengths_mm = expand(parse_range(sweep.l_mm, "--l-mm"));
    std::vector<double> radii, lengths;
    for (double k : ratios) radii.push_back(k * base.probe.waist);
    for (double l : lengths_mm) lengths.push_back(l * 1e-3);

    const SweepOptions opts{search, args.workers};
    std::vector<SweepRow> rows;
    for (ControlConfig kind : controls_for(sweep.control)) {
        const auto part = sweep_dimensions(base, kind, lengths, radii, opts);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    ordered_json extra;
    extra["r_over_wp"] = ratios;
    extra["l_mm"] = lengths_mm;
    std::printf("%zu grid points evaluated\n", rows.size());
    return report_rows(cfg, "sweep_grid", "sweep_grid.csv", rows, std::move(extra));
}

int cmd_density(const CommonArgs& args, std::optional<double> r_over_wp, bool optimize,
                const AmplitudeSearch& search) {
    RunConfig cfg = resolve_config(args);
    if (r_over_wp) cfg.geometry.radius_um = *r_over_wp * cfg.probe.waist_um;
    cfg.validate();
    const SimulationConfig base = cfg.to_simulation();

    ordered_json res;
    auto run = [&](ControlConfig kind) {
        SimulationConfig c = with_control(base, kind);
        if (optimize) {
            const double a = optimize_amplitude(c, search).a_opt;
            c.schedule.amp_write = c.schedule.amp_read = a;
        }
        SimulationResult r = run_sequence(c);
        ordered_json j = result_json(r);
        j["amplitude"] = c.schedule.amp_write;
        res[std::string(to_string(kind))] = std::move(j);
        return r;
    };
    const SimulationResult ext = run(ControlConfig::Extended);
    const SimulationResult fin = run(ControlConfig::FiniteWaist);
    write_table(cfg, "density.csv", density_csv(make_density_profile(ext, fin, base.probe)));
    res["optimized"] = optimize;
    write_summary(cfg, "density", res);
    print_efficiencies("extended: ", ext.eta_w, ext.eta_r, ext.eta_tot);
    print_efficiencies("finite:   ", fin.eta_w, fin.eta_r, fin.eta_tot);
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    const RunConfig cfg = resolve_config(args);
    const auto suites = run_property_suites(cfg.to_simulation());
    ordered_json list = ordered_json::array();
    bool all = true;
    for (const auto& s : suites) {
        std::printf("%s %-28s %.3e (tol %.1e)  %s\n", s.passed ? "PASS" : "FAIL", s.name.c_str(), s.value,
                    s.tolerance, s.detail.c_str());
        all = all && s.passed;
        list.push_back({{"name", s.name},
                        {"passed", s.passed},
                        {"value", s.value},
                        {"tolerance", s.tolerance},
                        {"detail", s.detail}});
    }
    ordered_json res;
    res["all_passed"] = all;
    res["suites"] = std::move(list);
    write_summary(cfg, "validate", res);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity EIT light storage simulator"};
    app.require_subcommand(1);

    CommonArgs common;
    SweepArgs sweep;
    AmplitudeSearch search;
    std::optional<double> density_ratio;
    bool density_optimize = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", common.out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--workers", common.workers, "Worker threads for sweeps (0 = all cores)");
        sub->add_flag("--seedless", common.seedless, "Accepted for compatibility; the simulator has no randomness")
            ->disable_flag_override();
    };
    auto add_search = [&](CLI::App* sub) {
        sub->add_option("--a-min", search.lo, "Lower end of the amplitude bracket");
        sub->add_option("--a-max", search.hi, "Upper end of the amplitude bracket");
        sub->add_option("--a-tol", search.tol, "Amplitude tolerance of the golden-section search");
    };

    auto* simulate = app.add_subcommand("simulate", "Run one write-store-read sequence");
    add_common(simulate);
    auto* optimize = app.add_subcommand("optimize", "Optimize the control amplitude A_w = A_r");
    add_common(optimize);
    add_search(optimize);
    auto* sweep_r = app.add_subcommand("sweep-radius", "Optimized efficiency versus crystal radius");
    add_common(sweep_r);
    add_search(sweep_r);
    auto* sweep_g = app.add_subcommand("sweep-grid", "Optimized efficiency over crystal length and radius");
    add_common(sweep_g);
    add_search(sweep_g);
    for (auto* sub : {sweep_r, sweep_g}) {
        sub->add_option("--r-over-wp", sweep.r_over_wp, "Radius grid in units of w_p, start:stop:step");
        sub->add_option("--mode", sweep.mode, "Probe mode (tem00 or lg01); default from config");
        sub->add_option("--control", sweep.control, "extended, finite or both");
    }
    sweep_g->add_option("--l-mm", sweep.l_mm, "Length grid in mm, start:stop:step");
    auto* density = app.add_subcommand("density", "Radial excitation density after the write pulse");
    add_common(density);
    add_search(density);
    density->add_option("--r-over-wp", density_ratio, "Crystal radius in units of w_p; default from config");
    density->add_flag("--optimize", density_optimize, "Use the optimal amplitude for each configuration");
    auto* validate = app.add_subcommand("validate", "Run the property suites");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*simulate) return cmd_simulate(common);
        if (*optimize) return cmd_optimize(common, search);
        if (*sweep_r) return cmd_sweep_radius(common, sweep, search);
        if (*sweep_g) return cmd_sweep_grid(common, sweep, search);
        if (*density) return cmd_density(common, density_ratio, density_optimize, search);
        if (*validate) return cmd_validate(common);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrationError& e) {
        std::cerr << "error: integration failed at t = " << e.time() << " s: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
