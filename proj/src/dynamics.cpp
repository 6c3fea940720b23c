#include "eitmem/dynamics.hpp"

#include "eitmem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace eitmem {

// ---------------------------------------------------------------------------
// Shell model

ShellModel::ShellModel(const SystemRates& rates, const ShellGrid& grid, const ModeProfile& probe,
                       const ModeProfile& control, Drive drive)
    : rates_(rates), drive_(std::move(drive)) {
    const std::size_t n = grid.size();
    if (grid.populations.size() != n)
        throw std::invalid_argument("ShellModel: grid radii/populations size mismatch");
    coupling_.resize(n);
    control_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        coupling_[j] = rates.g * std::sqrt(grid.populations[j]) * mode_amplitude(probe, grid.radii[j]);
        control_[j] = mode_amplitude(control, grid.radii[j]);
    }
}

void ShellModel::rhs(double t, std::span<const double> y, std::span<double> dydt) const {
    const std::size_t n = shells();
    if (y.size() != dimension() || dydt.size() != dimension())
        throw std::invalid_argument("ShellModel::rhs: state dimension does not match grid");
    const std::size_t half = 1 + 2 * n;

    const cplx a_in = drive_.input ? drive_.input(t) : cplx{};
    const double omega = drive_.omega ? drive_.omega(t) : 0.0;

    kernels::ShellRhsArgs args;
    args.coupling = coupling_;
    args.control = control_;
    args.gamma = rates_.gamma;
    args.gamma0 = rates_.gamma0;
    args.omega = omega;
    args.a_re = y[0];
    args.a_im = y[half];
    args.p_re = y.subspan(1, n);
    args.s_re = y.subspan(1 + n, n);
    args.p_im = y.subspan(half + 1, n);
    args.s_im = y.subspan(half + 1 + n, n);
    args.dp_re = dydt.subspan(1, n);
    args.ds_re = dydt.subspan(1 + n, n);
    args.dp_im = dydt.subspan(half + 1, n);
    args.ds_im = dydt.subspan(half + 1 + n, n);

    const kernels::ComplexSum sum = kernels::active_kernel().shell_rhs(args);

    const double drive = std::sqrt(2.0 * rates_.kappa);
    dydt[0] = -rates_.kappa * y[0] - sum.im + drive * a_in.real();
    dydt[half] = -rates_.kappa * y[half] + sum.re + drive * a_in.imag();
}

std::vector<double> ShellModel::pack(const ShellState& state) const {
    const std::size_t n = shells();
    if (state.P.size() != n || state.S.size() != n)
        throw std::invalid_argument("ShellModel: state size does not match grid");
    const std::size_t half = 1 + 2 * n;
    std::vector<double> y(dimension());
    y[0] = state.a.real();
    y[half] = state.a.imag();
    for (std::size_t j = 0; j < n; ++j) {
        y[1 + j] = state.P[j].real();
        y[1 + n + j] = state.S[j].real();
        y[half + 1 + j] = state.P[j].imag();
        y[half + 1 + n + j] = state.S[j].imag();
    }
    return y;
}

ShellState ShellModel::unpack(std::span<const double> y) const {
    const std::size_t n = shells();
    if (y.size() != dimension())
        throw std::invalid_argument("ShellModel: flat state size does not match grid");
    const std::size_t half = 1 + 2 * n;
    ShellState s;
    s.a = {y[0], y[half]};
    s.P.resize(n);
    s.S.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        s.P[j] = {y[1 + j], y[half + 1 + j]};
        s.S[j] = {y[1 + n + j], y[half + 1 + n + j]};
    }
    return s;
}

ShellState ShellModel::derivative(double t, const ShellState& state) const {
    const std::vector<double> y = pack(state);
    std::vector<double> dy(dimension());
    rhs(t, y, dy);
    return unpack(dy);
}

// ---------------------------------------------------------------------------
// Collective model

CollectiveModel::CollectiveModel(const SystemRates& rates, double n_eff, Drive drive)
    : rates_(rates), g_n_(rates.g * std::sqrt(n_eff)), drive_(std::move(drive)) {
    if (!(n_eff >= 0.0)) throw std::invalid_argument("CollectiveModel: N must be >= 0");
}

void CollectiveModel::rhs(double t, std::span<const double> y, std::span<double> dydt) const {
    const cplx a{y[0], y[3]}, p{y[1], y[4]}, s{y[2], y[5]};
    const CollectiveState d = derivative(t, {a, p, s});
    dydt[0] = d.a.real();
    dydt[1] = d.P.real();
    dydt[2] = d.S.real();
    dydt[3] = d.a.imag();
    dydt[4] = d.P.imag();
    dydt[5] = d.S.imag();
}

CollectiveState CollectiveModel::derivative(double t, const CollectiveState& st) const {
    constexpr cplx i{0.0, 1.0};
    const cplx a_in = drive_.input ? drive_.input(t) : cplx{};
    const double omega = drive_.omega ? drive_.omega(t) : 0.0;
    CollectiveState d;
    d.a = -rates_.kappa * st.a + i * g_n_ * st.P + std::sqrt(2.0 * rates_.kappa) * a_in;
    d.P = -rates_.gamma * st.P + i * g_n_ * st.a + i * omega * st.S;
    d.S = -rates_.gamma0 * st.S + i * omega * st.P;
    return d;
}

// ---------------------------------------------------------------------------
// Write-store-read driver

std::size_t SimulationConfig::resolved_shells() const {
    return n_shells > 0 ? n_shells : default_shell_count(geometry, probe, control);
}

void SimulationConfig::validate() const {
    rates.validate();
    if (!(rates.kappa > 0.0) || !(rates.gamma > 0.0))
        throw std::invalid_argument("SimulationConfig: kappa and gamma must be > 0");
    geometry.validate();
    probe.validate();
    control.validate();
    schedule.validate();
    integrator.validate();
    if (!(samples_per_kappa >= 20.0))
        throw std::invalid_argument("SimulationConfig: samples_per_kappa must be >= 20");
}

double trapezoid_intensity(std::span<const double> t, std::span<const cplx> f, std::size_t first,
                           std::size_t last) {
    double acc = 0.0;
    for (std::size_t k = first; k < last; ++k)
        acc += 0.5 * (t[k + 1] - t[k]) * (std::norm(f[k]) + std::norm(f[k + 1]));
    return acc;
}

namespace {

using ModelFactory = std::function<RhsFunction(const Drive&)>;

struct Phase {
    double begin;
    double end;
    Drive drive;
};

std::vector<double> uniform_samples(double a, double b, double dt) {
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / dt - 1e-9)));
    std::vector<double> t(m + 1);
    for (std::size_t k = 0; k <= m; ++k) t[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(m);
    t.back() = b;
    return t;
}

// Integrates the three phases of a model whose flat state is
// [re a, re P[n], re S[n], im a, im P[n], im S[n]].
void run_phases(const SimulationConfig& cfg, const ModelFactory& factory, std::size_t n,
                double coop, SimulationResult& res) {
    const PulseSchedule& sch = cfg.schedule;
    const SystemRates& rates = cfg.rates;
    const double gamma = rates.gamma;
    const cplx scale = cfg.input_scale;
    const double duration = sch.duration;

    auto input = [scale, duration](double t) { return scale * probe_input(t, duration); };
    const bool on = cfg.control_enabled;
    const Phase phases[3] = {
        {sch.t_start, sch.write_end,
         Drive{input, [=](double t) { return on ? control_write(t, sch, gamma, coop) : 0.0; }}},
        {sch.write_end, sch.read_start, Drive{input, [](double) { return 0.0; }}},
        {sch.read_start, sch.t_end,
         Drive{input, [=](double t) { return on ? control_read(t, sch, gamma, coop) : 0.0; }}},
    };

    // Absolute tolerance in units of the input amplitude keeps the step
    // sequence invariant under a_in -> c a_in.
    IntegratorOptions opts = cfg.integrator;
    opts.max_step = std::min(opts.max_step, duration / 10.0);
    opts.complex_halves = true;
    if (std::abs(scale) > 0.0) opts.atol *= std::abs(scale);
    const double dt_report = 1.0 / (cfg.samples_per_kappa * rates.kappa);

    const std::size_t half = 1 + 2 * n;
    const std::size_t p_at = 1, s_at = 1 + n;
    std::vector<double> y(2 * half, 0.0);
    std::vector<double> norm, dissipation;

    auto sums = [n, half](std::span<const double> s, std::size_t offset) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double re = s[offset + j], im = s[half + offset + j];
            acc += re * re + im * im;
        }
        return acc;
    };

    for (int p = 0; p < 3; ++p) {
        const Phase& ph = phases[p];
        const std::vector<double> samples = uniform_samples(ph.begin, ph.end, dt_report);
        const RhsFunction rhs = factory(ph.drive);

        auto observe = [&](std::size_t k, double t, std::span<const double> s) {
            if (p > 0 && k == 0) return;  // duplicate of the previous phase's last sample
            const cplx a{s[0], s[half]};
            const cplx ain = ph.drive.input(t);
            const double p_sq = sums(s, p_at);
            const double s_sq = sums(s, s_at);
            res.times.push_back(t);
            res.a.push_back(a);
            res.a_in.push_back(ain);
            res.a_out.push_back(output_field(a, ain, rates.kappa));
            res.omega.push_back(ph.drive.omega(t));
            norm.push_back(std::norm(a) + p_sq + s_sq);
            dissipation.push_back(2.0 * gamma * p_sq + 2.0 * rates.gamma0 * s_sq);
        };

        res.diagnostics.stats += integrate(rhs, y, ph.begin, ph.end, samples, observe, opts);

        if (p == 0) {
            res.write_end_index = res.times.size() - 1;
            res.S_final_write.resize(n);
            for (std::size_t j = 0; j < n; ++j)
                res.S_final_write[j] = {y[s_at + j], y[half + s_at + j]};
            res.stored_write = sums(y, s_at);
        } else if (p == 1) {
            res.read_start_index = res.times.size() - 1;
            res.stored_read = sums(y, s_at);
        }
    }

    const std::size_t last = res.times.size() - 1;
    res.input_photons = trapezoid_intensity(res.times, res.a_in, 0, res.write_end_index);
    res.output_photons = trapezoid_intensity(res.times, res.a_out, res.read_start_index, last);
    res.eta_tot = res.input_photons > 0.0 ? res.output_photons / res.input_photons : 0.0;
    res.eta_w = res.input_photons > 0.0 ? res.stored_write / res.input_photons : 0.0;
    res.eta_r = res.stored_read > 0.0 ? res.output_photons / res.stored_read : 0.0;

    // Energy balance: stored + emitted + dissipated - injected == 0.
    double flux = 0.0;
    double worst = std::abs(norm[0]);
    for (std::size_t k = 1; k <= last; ++k) {
        const double dt = res.times[k] - res.times[k - 1];
        auto rate = [&](std::size_t i) {
            return std::norm(res.a_in[i]) - std::norm(res.a_out[i]) - dissipation[i];
        };
        flux += 0.5 * dt * (rate(k - 1) + rate(k));
        worst = std::max(worst, std::abs(norm[k] - flux));
    }
    res.diagnostics.norm_residual = res.input_photons > 0.0 ? worst / res.input_photons : worst;

    res.diagnostics.adiabaticity = adiabaticity(duration, gamma, coop);
    if (cfg.control_enabled && res.diagnostics.adiabaticity < kAdiabaticityWarning) {
        std::ostringstream msg;
        msg << "adiabaticity 2TC*gamma = " << res.diagnostics.adiabaticity
            << " is below " << kAdiabaticityWarning << "; optimal pulses may not apply";
        res.diagnostics.warnings.push_back(msg.str());
    }
}

}  // namespace

SimulationResult run_sequence(const SimulationConfig& config) {
    config.validate();
    SimulationResult res;
    res.grid = build_shell_grid(config.geometry, config.resolved_shells());
    res.n_eff = effective_atom_number(res.grid, config.probe);
    res.cooperativity = cooperativity(config.rates, res.n_eff);
    res.diagnostics.kernel = std::string(kernels::active_kernel().name);

    const ShellGrid& grid = res.grid;
    auto factory = [&](const Drive& drive) -> RhsFunction {
        auto model = std::make_shared<const ShellModel>(config.rates, grid, config.probe,
                                                        config.control, drive);
        return [model](double t, std::span<const double> y, std::span<double> dy) {
            model->rhs(t, y, dy);
        };
    };
    run_phases(config, factory, grid.size(), res.cooperativity, res);
    return res;
}

SimulationResult run_collective_sequence(const SimulationConfig& config) {
    config.validate();
    if (!config.control.is_uniform())
        throw std::invalid_argument("run_collective_sequence: requires a uniform control profile");
    SimulationResult res;
    res.grid = build_shell_grid(config.geometry, config.resolved_shells());
    res.n_eff = effective_atom_number(res.grid, config.probe);
    res.cooperativity = cooperativity(config.rates, res.n_eff);
    res.diagnostics.kernel = "collective";

    const double n_eff = res.n_eff;
    auto factory = [&](const Drive& drive) -> RhsFunction {
        auto model = std::make_shared<const CollectiveModel>(config.rates, n_eff, drive);
        return [model](double t, std::span<const double> y, std::span<double> dy) {
            model->rhs(t, y, dy);
        };
    };
    run_phases(config, factory, 1, res.cooperativity, res);
    return res;
}

std::vector<DensityPoint> radial_excitation_density(std::span<const cplx> s_final_write,
                                                    const ShellGrid& grid) {
    if (s_final_write.size() != grid.size())
        throw std::invalid_argument("radial_excitation_density: snapshot size does not match grid");
    std::vector<DensityPoint> out;
    out.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double nj = grid.populations[j];
        if (!(nj > 0.0)) continue;
        out.push_back({grid.radii[j], nj, std::norm(s_final_write[j]) / nj});
    }
    return out;
}

}  // namespace eitmem
