// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "eitmem/experiments.hpp"
#include "eitmem/validate.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace eitmem;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* pattern, ...) {
    char buf[1024];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// Closed-form effective ion numbers of a uniform disc, U = 2 R^2 / w^2.
double n_tem00_closed(double areal, double w, double r) {
    const double u = 2.0 * r * r / (w * w);
    return areal * kPi * w * w / 2.0 * (1.0 - std::exp(-u));
}

double n_lg01_closed(double areal, double w, double r) {
    const double u = 2.0 * r * r / (w * w);
    return areal * kPi * w * w / 2.0 * (1.0 - (1.0 + u) * std::exp(-u));
}

double bound_oracle(double c) { return std::pow(2.0 * c / (1.0 + 2.0 * c), 2); }

SimulationConfig reference() { return SimulationConfig{}; }

SimulationConfig finite_waist() {
    SimulationConfig c;
    c.control = c.probe;
    return c;
}

// Peak row, plus a parabola through the peak and its neighbours for the
// location between grid points.
struct Peak {
    std::size_t index = 0;
    double ratio = 0.0;
    double refined_ratio = 0.0;
};

Peak locate_peak(const std::vector<SweepRow>& rows, double waist_um) {
    Peak p;
    p.index = argmax_eta(rows);
    p.ratio = rows[p.index].R_um / waist_um;
    p.refined_ratio = p.ratio;
    if (p.index > 0 && p.index + 1 < rows.size()) {
        const double x0 = rows[p.index - 1].R_um, x1 = rows[p.index].R_um, x2 = rows[p.index + 1].R_um;
        const double y0 = rows[p.index - 1].eta_tot, y1 = rows[p.index].eta_tot, y2 = rows[p.index + 1].eta_tot;
        const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
        const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
        const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
        if (a < 0.0) p.refined_ratio = -b / (2.0 * a) / waist_um;
    }
    return p;
}

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const SimulationResult r = run_sequence(reference());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = within(r.eta_w, 0.970, 0.005) && within(r.eta_r, 0.971, 0.005) &&
                    within(r.eta_tot, 0.942, 0.005) && secs < 10.0;
    report(1, "extended baseline", ok,
           fmt("eta_w=%.4f (0.970+-0.005) eta_r=%.4f (0.971+-0.005) eta_tot=%.4f (0.942+-0.005) runtime=%.2fs (<10s)",
               r.eta_w, r.eta_r, r.eta_tot, secs));
}

void criterion_2() {
    SimulationConfig c = reference();
    const auto n_at = [&](double radius) {
        c.geometry.radius = radius;
        return effective_atom_number(build_shell_grid(c.geometry, c.resolved_shells()), c.probe);
    };
    const double w = c.probe.waist;
    const double areal = c.geometry.areal_density();
    const double n100 = n_at(100e-6);
    const double n095 = n_at(0.95 * w);
    const double c100 = n_tem00_closed(areal, w, 100e-6);
    const double c095 = n_tem00_closed(areal, w, 0.95 * w);
    const double closed_err = std::max(std::abs(n100 / c100 - 1.0), std::abs(n095 / c095 - 1.0));
    const bool ok = within(n100, 3936.0, 0.01 * 3936.0) && within(n095, 3279.0, 0.02 * 3279.0) && closed_err < 1e-3;
    report(2, "effective ion number", ok,
           fmt("N(100um)=%.1f (3936+-1%%) N(0.95w_p)=%.1f (3279+-2%%) closed-form %.1f / %.1f, max rel diff %.1e (<1e-3)",
               n100, n095, c100, c095, closed_err));
}

void criterion_3() {
    const AmplitudeOptimum opt = optimize_amplitude(finite_waist());
    const bool ok = opt.a_opt >= 2.2 && opt.a_opt <= 2.7 && within(opt.eta_tot, 0.667, 0.02);
    report(3, "finite-waist optimum at R = 100 um", ok,
           fmt("A_opt=%.3f ([2.2, 2.7]) eta_tot=%.4f (0.667+-0.02) after %zu evaluations", opt.a_opt, opt.eta_tot,
               opt.evaluations));
}

struct RadiusTables {
    std::vector<SweepRow> tem_ext, tem_fin, lg_ext, lg_fin;
};

RadiusTables radius_tables() {
    const SimulationConfig base = reference();
    const std::vector<double> radii = radius_grid(base.probe.waist, 0.1, 3.0, 0.1);
    const ModeComparison m = compare_modes(base, radii);
    return {m.tem00_extended, m.tem00_finite, m.lg01_extended, m.lg01_finite};
}

void criterion_4(const RadiusTables& t) {
    const double w_um = reference().probe.waist * 1e6;
    const Peak p = locate_peak(t.tem_fin, w_um);
    const SweepRow& best = t.tem_fin[p.index];

    // Optimizer noise on the plateau is ~1e-9; a decrease larger than 1e-6
    // counts as a violation.
    double worst_drop = 0.0;
    for (std::size_t i = 1; i < t.tem_ext.size(); ++i)
        worst_drop = std::max(worst_drop, t.tem_ext[i - 1].eta_tot - t.tem_ext[i].eta_tot);
    const std::size_t n = t.tem_ext.size();
    const double tail_spread = t.tem_ext[n - 1].eta_tot - t.tem_ext[n - 6].eta_tot;
    const double rise = t.tem_ext[n - 1].eta_tot - t.tem_ext[0].eta_tot;
    const bool monotone = worst_drop <= 1e-6;
    const bool saturating = std::abs(tail_spread) < 1e-4 && rise > 0.5;

    const bool ok = within(p.ratio, 0.95, 0.10) && within(best.eta_tot, 0.914, 0.015) &&
                    within(best.a_opt, 1.5, 0.2) && monotone && saturating;
    report(4, "TEM00 radius sweep", ok,
           fmt("finite peak at R/w_p=%.2f (parabolic %.3f; 0.95+-0.10) eta=%.4f (0.914+-0.015) A_opt=%.3f (1.5+-0.2); "
               "extended max drop %.1e (<=1e-6), last-5 spread %.1e (<1e-4), plateau %.4f",
               p.ratio, p.refined_ratio, best.eta_tot, best.a_opt, worst_drop, tail_spread,
               t.tem_ext[n - 1].eta_tot));
}

void criterion_5(const RadiusTables& t) {
    const double w_um = reference().probe.waist * 1e6;
    const Peak p = locate_peak(t.lg_fin, w_um);
    const double n_tem = t.tem_ext.back().n_eff;
    const double n_lg = t.lg_ext.back().n_eff;
    const double sat_diff = std::abs(n_lg / n_tem - 1.0);
    // Both saturate to rho L pi w^2 / 2.
    const double ceiling = reference().geometry.areal_density() * kPi * std::pow(reference().probe.waist, 2) / 2.0;
    const double lg_closed = n_lg01_closed(reference().geometry.areal_density(), reference().probe.waist,
                                           t.lg_ext.back().R_um * 1e-6);
    const bool ok = within(p.ratio, 1.35, 0.10) && sat_diff <= 0.005 && std::abs(n_lg / lg_closed - 1.0) < 2e-3;
    report(5, "LG01 radius sweep", ok,
           fmt("finite peak at R/w_p=%.2f (parabolic %.3f; 1.35+-0.10) eta=%.4f; saturated N_eff TEM00=%.1f LG01=%.1f "
               "differ by %.2e (<=0.5%%), ceiling rho L pi w^2/2=%.1f",
               p.ratio, p.refined_ratio, t.lg_fin[p.index].eta_tot, n_tem, n_lg, sat_diff, ceiling));
}

void criterion_6() {
    const SimulationConfig base = reference();
    const std::vector<double> lengths{1e-3, 2e-3, 3e-3, 4e-3, 5e-3};
    const std::vector<double> radii = radius_grid(base.probe.waist, 0.2, 3.0, 0.2);
    const auto ext = sweep_dimensions(base, ControlConfig::Extended, lengths, radii);
    const auto fin = sweep_dimensions(base, ControlConfig::FiniteWaist, lengths, radii);
    const std::size_t nr = radii.size();

    int ext_violations = 0, fin_violations = 0, failed_rows = 0;
    for (const auto* rows : {&ext, &fin})
        for (const auto& r : *rows) failed_rows += r.ok() ? 0 : 1;
    for (std::size_t ir = 0; ir < nr; ++ir)
        for (std::size_t il = 1; il < lengths.size(); ++il)
            if (!(ext[il * nr + ir].eta_tot > ext[(il - 1) * nr + ir].eta_tot)) ++ext_violations;
    std::string peaks;
    for (std::size_t il = 0; il < lengths.size(); ++il) {
        const std::vector<SweepRow> row(fin.begin() + static_cast<long>(il * nr),
                                        fin.begin() + static_cast<long>((il + 1) * nr));
        const std::size_t k = argmax_eta(row);
        if (k == 0 || k + 1 == nr) ++fin_violations;
        peaks += fmt("%s%.1f", peaks.empty() ? "" : ",", row[k].R_um / (base.probe.waist * 1e6));
    }
    const bool ok = ext_violations == 0 && fin_violations == 0 && failed_rows == 0;
    report(6, "L x R maps", ok,
           fmt("%zu x %zu grid; extended non-increasing steps in L: %d; finite rows without interior maximum: %d "
               "(peak R/w_p per L = %s); failed rows %d",
               lengths.size(), nr, ext_violations, fin_violations, peaks.c_str(), failed_rows));
}

void criterion_7() {
    SimulationConfig base = reference();
    const double c0 = cooperativity(base.rates,
                                    effective_atom_number(build_shell_grid(base.geometry, base.resolved_shells()),
                                                          base.probe));
    double worst = 0.0;
    std::string detail;
    for (double target : {5.0, 10.0, 15.0, 20.0}) {
        SimulationConfig c = base;
        c.geometry.length = base.geometry.length * target / c0;
        const SimulationResult r = run_sequence(c);
        const double d = std::abs(r.eta_tot - bound_oracle(r.cooperativity));
        worst = std::max(worst, d);
        detail += fmt("%sC=%.1f %.4f/%.4f", detail.empty() ? "" : " ", r.cooperativity, r.eta_tot,
                      bound_oracle(r.cooperativity));
    }
    report(7, "adiabatic-limit regression", worst <= 0.01,
           fmt("simulated/bound: %s; max |diff| %.4f (<=0.01)", detail.c_str(), worst));
}

void criterion_8() {
    const auto suites = run_property_suites(reference());
    bool ok = true;
    std::string detail;
    for (const auto& s : suites) {
        ok = ok && s.passed;
        detail += fmt("%s%s %s %.1e<=%.0e", detail.empty() ? "" : "; ", s.name.c_str(), s.passed ? "ok" : "FAILED",
                      s.value, s.tolerance);
    }
    report(8, "property suites", ok, detail);
}

void criterion_9() {
    std::string detail;
    bool ok = true;
    for (const auto& [name, cfg] : {std::pair{"extended", reference()}, std::pair{"finite", finite_waist()}}) {
        const InvarianceReport rep = invariance_checks(cfg);
        const bool pass = rep.max_asymmetric_gain <= 0.005 && rep.max_duration_change <= 0.01 &&
                          rep.storage_change <= 1e-6;
        ok = ok && pass;
        detail += fmt("%s%s: A_opt=%.3f eta=%.4f, (A_w,A_r) gain %.1e (<=0.005), T in [1,3]us change %.1e (<=0.01), "
                      "doubled T_s change %.1e (<=1e-6)",
                      detail.empty() ? "" : "; ", name, rep.a_opt, rep.eta_baseline, rep.max_asymmetric_gain,
                      rep.max_duration_change, rep.storage_change);
    }
    report(9, "robustness", ok, detail);
}

void guarded(const std::function<void()>& fn, int id) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, "exception", false, e.what());
    }
}

}  // namespace

int main() {
    guarded(criterion_1, 1);
    guarded(criterion_2, 2);
    guarded(criterion_3, 3);
    try {
        const RadiusTables tables = radius_tables();
        guarded([&] { criterion_4(tables); }, 4);
        guarded([&] { criterion_5(tables); }, 5);
    } catch (const std::exception& e) {
        report(4, "exception", false, e.what());
        report(5, "exception", false, e.what());
    }
    guarded(criterion_6, 6);
    guarded(criterion_7, 7);
    guarded(criterion_8, 8);
    guarded(criterion_9, 9);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
