#include "ramanecho/pulses.hpp"

#include "ramanecho/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ramanecho {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

// int_0^x sin^4(pi u / 2) du  -- cumulative intensity of a raised-cosine
// amplitude ramp, F(1) = 3/8.
double ramp_cum(double x)
{
    x = std::clamp(x, 0.0, 1.0);
    return 3.0 * x / 8.0 - std::sin(kPi * x) / (2.0 * kPi) +
           std::sin(2.0 * kPi * x) / (16.0 * kPi);
}

double rise(double x) // amplitude profile of the ramp
{
    x = std::clamp(x, 0.0, 1.0);
    const double s = std::sin(0.5 * kPi * x);
    return s * s;
}
} // namespace

PulseShape PulseShape::rect_smoothed(double t_on, double t_off, double amplitude,
                                     double edge)
{
    if (!(t_off > t_on))
        throw InvalidWindow("rect_smoothed: t_off must exceed t_on");
    if (!(edge > 0.0))
        throw InvalidWindow("rect_smoothed: edge must be positive (adiabatic switching)");
    if (!(t_off - t_on >= edge))
        throw InvalidWindow("rect_smoothed: effective window shorter than the edge");
    if (amplitude < 0.0)
        throw InvalidWindow("rect_smoothed: amplitude must be >= 0");
    PulseShape p;
    p.kind = Kind::RectSmoothed;
    p.amplitude = amplitude;
    p.t_on = t_on;
    p.t_off = t_off;
    p.edge = edge;
    return p;
}

PulseShape PulseShape::gaussian(double center, double sigma, double amplitude,
                                double half_support)
{
    if (!(sigma > 0.0))
        throw InvalidWindow("gaussian pulse: sigma must be positive");
    if (!(half_support >= 6.0 * sigma))
        throw InvalidWindow("gaussian pulse: support must extend >= 6 sigma");
    if (amplitude < 0.0)
        throw InvalidWindow("gaussian pulse: amplitude must be >= 0");
    PulseShape p;
    p.kind = Kind::Gaussian;
    p.amplitude = amplitude;
    p.t_on = center - half_support;
    p.t_off = center + half_support;
    p.edge = sigma;
    return p;
}

double PulseShape::support_begin() const
{
    return kind == Kind::RectSmoothed ? t_on - 0.625 * edge : t_on;
}

double PulseShape::support_end() const
{
    return kind == Kind::RectSmoothed ? t_off + 0.625 * edge : t_off;
}

double PulseShape::value(double t) const
{
    if (amplitude == 0.0)
        return 0.0;
    if (kind == Kind::Gaussian) {
        if (t < t_on || t > t_off)
            return 0.0;
        const double c = 0.5 * (t_on + t_off);
        const double u = (t - c) / edge;
        return amplitude * std::exp(-0.5 * u * u);
    }
    const double r0 = t_on - 0.625 * edge;  // up-ramp start
    const double f0 = t_on + 0.375 * edge;  // flat start
    const double f1 = t_off - 0.375 * edge; // flat end
    const double r1 = t_off + 0.625 * edge; // down-ramp end
    if (t <= r0 || t >= r1)
        return 0.0;
    if (t < f0)
        return amplitude * rise((t - r0) / edge);
    if (t <= f1)
        return amplitude;
    return amplitude * rise((r1 - t) / edge);
}

double PulseShape::intensity(double t) const
{
    const double v = value(t);
    return v * v;
}

double PulseShape::intensity_area(double t1, double t2) const
{
    if (!(t2 >= t1))
        throw InvalidWindow("intensity_area: reversed window");
    if (amplitude == 0.0)
        return 0.0;
    const double a2 = amplitude * amplitude;

    if (kind == Kind::Gaussian) {
        const double c = 0.5 * (t_on + t_off);
        const double lo = std::max(t1, t_on);
        const double hi = std::min(t2, t_off);
        if (hi <= lo)
            return 0.0;
        // |Omega|^2 = a2 exp(-(t-c)^2/sigma^2)
        const double s = edge;
        return a2 * s * 0.5 * std::sqrt(kPi) *
               (std::erf((hi - c) / s) - std::erf((lo - c) / s));
    }

    const double r0 = t_on - 0.625 * edge;
    const double f0 = t_on + 0.375 * edge;
    const double f1 = t_off - 0.375 * edge;
    const double r1 = t_off + 0.625 * edge;

    double area = 0.0;
    // up-ramp
    {
        const double lo = std::max(t1, r0), hi = std::min(t2, f0);
        if (hi > lo)
            area += a2 * edge * (ramp_cum((hi - r0) / edge) - ramp_cum((lo - r0) / edge));
    }
    // flat
    {
        const double lo = std::max(t1, f0), hi = std::min(t2, f1);
        if (hi > lo)
            area += a2 * (hi - lo);
    }
    // down-ramp (mirror of the up-ramp)
    {
        const double lo = std::max(t1, f1), hi = std::min(t2, r1);
        if (hi > lo)
            area += a2 * edge * (ramp_cum((r1 - lo) / edge) - ramp_cum((r1 - hi) / edge));
    }
    return area;
}

double PulseShape::total_area() const
{
    return intensity_area(support_begin(), support_end());
}

void ControlSchedule::validate() const
{
    if (!(write.t_off <= t_a))
        throw ScheduleInvalid("write pulse must be switched off by T_a");
    if (!(t_a < t_s))
        throw ScheduleInvalid("dark storage requires T_a < T_s");
    if (!(t_s < rephase.t_on))
        throw ScheduleInvalid("rephasing pulse must start after T_s");
    if (!(rephase.t_off <= t_s + t_r))
        throw ScheduleInvalid("rephasing pulse must end within the rephasing stage");
    if (!(t_s + t_r <= read.t_on))
        throw ScheduleInvalid("read pulse must not start before T_s + T_R");
    if (write.support_end() > rephase.support_begin())
        throw ScheduleInvalid("write and rephase pulses overlap physically");
    if (rephase.support_end() > read.support_begin())
        throw ScheduleInvalid("rephase and read pulses overlap physically");
    if (pi_pulses) {
        const auto [p1, p2] = *pi_pulses;
        if (!(p1 >= write.support_end() && p1 < rephase.support_begin()))
            throw ScheduleInvalid("first pi-pulse must sit between write-off and rephasing");
        if (!(p2 > rephase.support_end() && p2 < read.support_begin()))
            throw ScheduleInvalid("second pi-pulse must sit between rephasing and read");
    }
}

FieldEnvelope make_gaussian_pulse(double center, double width, cplx amplitude,
                                  const TimeGrid& grid)
{
    if (!(width > 4.0 * grid.dt))
        throw GridTooCoarse("make_gaussian_pulse: width must exceed 4 dt");
    const double lo = grid.t0;
    const double hi = grid.t0 + grid.span() - grid.dt;
    if (center - 5.0 * width < lo || center + 5.0 * width > hi)
        throw PulseClipped("make_gaussian_pulse: needs a 5-sigma margin inside the grid");

    FieldEnvelope f(grid);
    if (amplitude == cplx{})
        return f;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double u = (grid.time(j) - center) / width;
        f.samples[j] = amplitude * std::exp(-0.5 * u * u);
    }
    return f;
}

double pulse_area(const PulseShape& p, double t_from, double t_to)
{
    if (!(t_from < t_to))
        throw InvalidWindow("pulse_area: t_from must precede t_to");
    return p.intensity_area(t_from, t_to);
}

} // namespace ramanecho
