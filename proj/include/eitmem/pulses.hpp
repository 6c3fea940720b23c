#pragma once

// Sech probe pulse and the impedance-matched write/read control envelopes.

#include <optional>

namespace eitmem {

/// Write-store-read timing. All times in seconds; the probe is centred at t = 0.
struct PulseSchedule {
    double duration = 2.0e-6;  ///< probe pulse duration T
    double amp_write = 1.0;    ///< A_w
    double amp_read = 1.0;     ///< A_r
    double t_start = -10.0e-6;
    double write_end = 10.0e-6;  ///< T_w
    double read_start = 20.0e-6; ///< T_r
    double t_end = 40.0e-6;

    double storage_time() const { return read_start - write_end; }

    /// Defaults derived from T: start at -5T, write ends at 5T, a 5T store
    /// gap, and the read window ends 5T after the read epoch T_r + T_s. The
    /// read control then starts from the same e^-10 tail the write pulse ends on.
    static PulseSchedule with_defaults(double duration, double amp_write = 1.0,
                                       double amp_read = 1.0);
    /// Window end that mirrors t_start through the read pulse: T_r + T_s + 5T.
    double default_end() const;

    void validate() const;
    bool operator==(const PulseSchedule&) const = default;
};

/// a_in(t) = sech(2t/T) / sqrt(T), in s^-1/2.
double probe_input(double t, double duration);

/// Unit-amplitude write profile sqrt(2 gamma (1+2C)/T) / sqrt(1 + exp(4t/T)).
double write_profile(double t, double duration, double gamma, double coop);

/// Write-phase Rabi frequency (rad/s); zero for t > T_w.
double control_write(double t, const PulseSchedule& sched, double gamma, double coop);

/// Read-phase Rabi frequency Omega_w(-t + T_r + T_s) with A_r; zero for t < T_r.
double control_read(double t, const PulseSchedule& sched, double gamma, double coop);

/// Full control envelope: write pulse up to T_w, zero while storing, read pulse from T_r.
double control_envelope(double t, const PulseSchedule& sched, double gamma, double coop);

/// Adiabaticity figure 2 T C gamma; should be >> 1.
double adiabaticity(double duration, double gamma, double coop);

inline constexpr double kAdiabaticityWarning = 100.0;

}  // namespace eitmem
