#include "eitmem/experiments.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eitmem {

std::string_view to_string(ControlConfig kind) {
    return kind == ControlConfig::Extended ? "extended" : "finite";
}

ControlConfig parse_control_config(std::string_view name) {
    if (name == "extended" || name == "uniform") return ControlConfig::Extended;
    if (name == "finite" || name == "same-as-probe") return ControlConfig::FiniteWaist;
    throw std::invalid_argument("unknown control configuration '" + std::string(name) + "'");
}

SimulationConfig with_control(SimulationConfig base, ControlConfig kind) {
    base.control = kind == ControlConfig::Extended ? ModeProfile::uniform() : base.probe;
    return base;
}

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("golden_section_maximize: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: need tol > 0");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    ScalarOptimum best{lo, -std::numeric_limits<double>::infinity(), 0};
    auto eval = [&](double x) {
        const double v = f(x);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = eval(d);
        }
    }
    return best;
}

void AmplitudeSearch::validate() const {
    if (!(lo > 0.0 && lo < hi))
        throw std::invalid_argument("AmplitudeSearch: require 0 < lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("AmplitudeSearch: tol must be > 0");
}

AmplitudeOptimum optimize_amplitude(const SimulationConfig& config, const AmplitudeSearch& search) {
    search.validate();
    config.validate();

    AmplitudeOptimum out;
    double best_eta = -1.0;
    auto objective = [&](double amp) {
        SimulationConfig c = config;
        c.schedule.amp_write = amp;
        c.schedule.amp_read = amp;
        const SimulationResult r = run_sequence(c);
        if (r.eta_tot > best_eta) {
            best_eta = r.eta_tot;
            out.eta_w = r.eta_w;
            out.eta_r = r.eta_r;
            out.n_eff = r.n_eff;
            out.cooperativity = r.cooperativity;
            out.n_shells = r.grid.size();
        }
        return r.eta_tot;
    };

    const ScalarOptimum opt = golden_section_maximize(objective, search.lo, search.hi, search.tol);
    out.a_opt = opt.x;
    out.eta_tot = opt.value;
    out.evaluations = opt.evaluations;
    out.at_bound = opt.x - search.lo <= search.tol || search.hi - opt.x <= search.tol;
    if (out.at_bound) {
        std::ostringstream msg;
        msg << "amplitude optimum A = " << opt.x << " lies within " << search.tol
            << " of the search bracket [" << search.lo << ", " << search.hi << "]";
        out.warnings.push_back(msg.str());
    }
    return out;
}

SweepRow evaluate_point(const SimulationConfig& config, ControlConfig kind,
                        const AmplitudeSearch& search) {
    SweepRow row;
    row.mode = config.probe.kind;
    row.config = kind;
    row.L_mm = config.geometry.length * 1e3;
    row.R_um = config.geometry.radius * 1e6;
    try {
        const SimulationConfig cfg = with_control(config, kind);
        const AmplitudeOptimum opt = optimize_amplitude(cfg, search);
        row.n_shells = opt.n_shells;
        row.n_eff = opt.n_eff;
        row.cooperativity = opt.cooperativity;
        row.a_opt = opt.a_opt;
        row.eta_w = opt.eta_w;
        row.eta_r = opt.eta_r;
        row.eta_tot = opt.eta_tot;
        row.status = opt.at_bound ? "bound" : "ok";
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.n_eff = row.cooperativity = row.a_opt = nan;
        row.eta_w = row.eta_r = row.eta_tot = nan;
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

std::vector<SweepRow> sweep_radius(const SimulationConfig& base, ControlConfig kind,
                                   const std::vector<double>& radii, const SweepOptions& opts) {
    if (radii.empty()) throw std::invalid_argument("sweep_radius: no radii given");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("sweep_radius: radii must be > 0");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw std::invalid_argument("sweep_radius: radii must be sorted ascending");
    }
    return parallel_map<SweepRow>(radii.size(), opts.workers, [&](std::size_t i) {
        SimulationConfig c = base;
        c.geometry.radius = radii[i];
        return evaluate_point(c, kind, opts.search);
    });
}

std::vector<SweepRow> sweep_dimensions(const SimulationConfig& base, ControlConfig kind,
                                       const std::vector<double>& lengths,
                                       const std::vector<double>& radii, const SweepOptions& opts) {
    if (lengths.empty() || radii.empty())
        throw std::invalid_argument("sweep_dimensions: grids must be nonempty");
    const std::size_t nr = radii.size();
    return parallel_map<SweepRow>(lengths.size() * nr, opts.workers, [&](std::size_t i) {
        SimulationConfig c = base;
        c.geometry.length = lengths[i / nr];
        c.geometry.radius = radii[i % nr];
        return evaluate_point(c, kind, opts.search);
    });
}

std::vector<SweepRow> ModeComparison::all() const {
    std::vector<SweepRow> out;
    for (const auto* t : {&tem00_extended, &tem00_finite, &lg01_extended, &lg01_finite})
        out.insert(out.end(), t->begin(), t->end());
    return out;
}

ModeComparison compare_modes(const SimulationConfig& base, const std::vector<double>& radii,
                             const SweepOptions& opts) {
    SimulationConfig tem = base;
    tem.probe = ModeProfile::tem00(base.probe.waist);
    SimulationConfig lg = base;
    lg.probe = ModeProfile::lg01(base.probe.waist);

    ModeComparison out;
    out.tem00_extended = sweep_radius(tem, ControlConfig::Extended, radii, opts);
    out.tem00_finite = sweep_radius(tem, ControlConfig::FiniteWaist, radii, opts);
    out.lg01_extended = sweep_radius(lg, ControlConfig::Extended, radii, opts);
    out.lg01_finite = sweep_radius(lg, ControlConfig::FiniteWaist, radii, opts);
    return out;
}

InvarianceReport invariance_checks(const SimulationConfig& config, const AmplitudeSearch& search) {
    InvarianceReport rep;
    const AmplitudeOptimum opt = optimize_amplitude(config, search);
    rep.a_opt = opt.a_opt;
    rep.eta_baseline = opt.eta_tot;

    auto eta_at = [&](double amp_w, double amp_r) {
        SimulationConfig c = config;
        c.schedule.amp_write = amp_w;
        c.schedule.amp_read = amp_r;
        return run_sequence(c).eta_tot;
    };

    // Decoupled write/read amplitudes.
    const double factors[] = {0.9, 0.95, 1.0, 1.05, 1.1};
    rep.best_amp_write = rep.best_amp_read = rep.a_opt;
    for (double fw : factors) {
        for (double fr : factors) {
            if (fw == 1.0 && fr == 1.0) continue;
            const double eta = eta_at(fw * rep.a_opt, fr * rep.a_opt);
            if (eta - rep.eta_baseline > rep.max_asymmetric_gain) {
                rep.max_asymmetric_gain = eta - rep.eta_baseline;
                rep.best_amp_write = fw * rep.a_opt;
                rep.best_amp_read = fr * rep.a_opt;
            }
        }
    }

    // Probe duration within +-50%.
    const double t0 = config.schedule.duration;
    for (double scale : {0.5, 0.75, 1.25, 1.5}) {
        SimulationConfig c = config;
        c.schedule = PulseSchedule::with_defaults(scale * t0, rep.a_opt, rep.a_opt);
        const double eta = run_sequence(c).eta_tot;
        rep.durations.push_back(scale * t0);
        rep.duration_etas.push_back(eta);
        rep.max_duration_change = std::max(rep.max_duration_change, std::abs(eta - rep.eta_baseline));
    }

    // Doubled storage time.
    {
        SimulationConfig c = config;
        c.schedule.amp_write = c.schedule.amp_read = rep.a_opt;
        c.schedule.read_start = c.schedule.write_end + 2.0 * config.schedule.storage_time();
        c.schedule.t_end = c.schedule.default_end();
        rep.storage_change = std::abs(run_sequence(c).eta_tot - rep.eta_baseline);
    }
    return rep;
}

std::size_t argmax_eta(const std::vector<SweepRow>& rows) {
    std::size_t best = 0;
    double best_eta = -1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].ok() && rows[i].eta_tot > best_eta) {
            best_eta = rows[i].eta_tot;
            best = i;
        }
    }
    return best;
}

std::vector<double> radius_grid(double waist, double first, double last, double step) {
    if (!(step > 0.0) || !(last >= first))
        throw std::invalid_argument("radius_grid: need step > 0 and last >= first");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
        const double ratio = std::round((first + step * static_cast<double>(k)) * 1e9) / 1e9;
        out.push_back(ratio * waist);
    }
    return out;
}

}  // namespace eitmem
