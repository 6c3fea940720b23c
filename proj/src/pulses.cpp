#include "eitmem/pulses.hpp"

#include <cmath>
#include <stdexcept>

namespace eitmem {

namespace {
constexpr double kStoreGapPerDuration = 5.0;
}

PulseSchedule PulseSchedule::with_defaults(double duration, double amp_write,
                                           double amp_read) {
    PulseSchedule s;
    s.duration = duration;
    s.amp_write = amp_write;
    s.amp_read = amp_read;
    s.t_start = -5.0 * duration;
    s.write_end = 5.0 * duration;
    s.read_start = s.write_end + kStoreGapPerDuration * duration;
    s.t_end = s.default_end();
    return s;
}

double PulseSchedule::default_end() const {
    return read_start + storage_time() + 5.0 * duration;
}

void PulseSchedule::validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("PulseSchedule: duration must be > 0");
    if (!(amp_write > 0.0) || !(amp_read > 0.0))
        throw std::invalid_argument("PulseSchedule: amplitudes must be > 0");
    if (!(t_start < write_end && write_end < read_start && read_start < t_end))
        throw std::invalid_argument(
            "PulseSchedule: require t_start < write_end < read_start < t_end");
}

double probe_input(double t, double duration) {
    return 1.0 / (std::sqrt(duration) * std::cosh(2.0 * t / duration));
}

double write_profile(double t, double duration, double gamma, double coop) {
    const double peak = std::sqrt(2.0 * gamma * (1.0 + 2.0 * coop) / duration);
    const double x = 4.0 * t / duration;
    // 1/sqrt(1+e^x) without overflow for large x
    if (x > 0.0) return peak * std::exp(-0.5 * x) / std::sqrt(1.0 + std::exp(-x));
    return peak / std::sqrt(1.0 + std::exp(x));
}

double control_write(double t, const PulseSchedule& sched, double gamma, double coop) {
    if (t > sched.write_end) return 0.0;
    return sched.amp_write * write_profile(t, sched.duration, gamma, coop);
}

double control_read(double t, const PulseSchedule& sched, double gamma, double coop) {
    if (t < sched.read_start) return 0.0;
    const double mirrored = -t + sched.read_start + sched.storage_time();
    return sched.amp_read * write_profile(mirrored, sched.duration, gamma, coop);
}

double control_envelope(double t, const PulseSchedule& sched, double gamma, double coop) {
    if (t <= sched.write_end) return control_write(t, sched, gamma, coop);
    if (t < sched.read_start) return 0.0;
    return control_read(t, sched, gamma, coop);
}

double adiabaticity(double duration, double gamma, double coop) {
    return 2.0 * duration * coop * gamma;
}

}  // namespace eitmem
