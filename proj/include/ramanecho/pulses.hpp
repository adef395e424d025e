#ifndef RAMANECHO_PULSES_HPP
#define RAMANECHO_PULSES_HPP

#include "ramanecho/grids.hpp"

#include <optional>

namespace ramanecho {

// Control-pulse shape. `t_on`/`t_off` mark the *effective rectangle*: the
// window of an ideal rectangular pulse with the same amplitude and the same
// |Omega|^2 area. For the rect-smoothed kind the raised-cosine ramps extend
// (5/8)*edge outside the window on each side and reach the flat top
// (3/8)*edge inside it, so that intensity_area(-inf, inf) == amp^2*(t_off-t_on)
// exactly. Phase bookkeeping across protocol stages leans on this identity.
struct PulseShape {
    enum class Kind { RectSmoothed, Gaussian };

    Kind kind = Kind::RectSmoothed;
    double amplitude = 0.0; // real >= 0
    double t_on = 0.0;
    double t_off = 0.0;
    double edge = 1.0; // ramp duration (rect-smoothed) or sigma (gaussian)

    static PulseShape rect_smoothed(double t_on, double t_off, double amplitude,
                                    double edge);
    static PulseShape gaussian(double center, double sigma, double amplitude,
                               double half_support);

    double value(double t) const;     // amplitude envelope |Omega(t)|
    double intensity(double t) const; // |Omega(t)|^2

    // int_{t1}^{t2} |Omega(tau)|^2 dtau in closed form.
    double intensity_area(double t1, double t2) const;
    double total_area() const; // over the full support

    // Physical support (envelope identically zero outside).
    double support_begin() const;
    double support_end() const;
};

// Piecewise protocol schedule. T_a/T_s mark stage boundaries on the global
// clock; T_r is the rephasing-stage duration, so the read control may start
// at T_s + T_r at the earliest.
struct ControlSchedule {
    PulseShape write;   // Omega_1
    PulseShape rephase; // Omega_R
    PulseShape read;    // Omega_2
    std::optional<std::pair<double, double>> pi_pulses; // {t_pi1, t_pi2}

    double t_a = 0.0; // write switch-off marker (== write.t_off)
    double t_s = 0.0; // dark-storage end / rephasing-stage start
    double t_r = 0.0; // rephasing-stage duration

    void validate() const; // throws ScheduleInvalid
};

// Canonical band-limited test input:
// A(tau) = amplitude * exp(-(tau-center)^2 / (2 width^2)).
FieldEnvelope make_gaussian_pulse(double center, double width, cplx amplitude,
                                  const TimeGrid& grid);

// int_{t_from}^{t_to} |Omega(tau)|^2 dtau (closed form; see tests for the
// quadrature oracle).
double pulse_area(const PulseShape& p, double t_from, double t_to);

} // namespace ramanecho

#endif
