#include "ramanecho/amr.hpp"

#include "ramanecho/errors.hpp"

#include <cmath>

namespace ramanecho {

namespace {
const cplx kI{0.0, 1.0};
}

PhaseFunctional phase_functional(const ControlSchedule& schedule, double delta1,
                                 double delta21)
{
    schedule.validate();
    const double w1 = schedule.write.total_area();
    const double pr = schedule.rephase.total_area();
    PhaseFunctional out;
    out.p_value = pr - w1;
    out.theta = delta21 * (schedule.t_s + schedule.t_r) - w1 / delta1 + pr / delta1;
    return out;
}

RephasePlan make_rephase_plan(const ControlSchedule& schedule, double delta1,
                              double delta21)
{
    const PhaseFunctional f = phase_functional(schedule, delta1, delta21);
    RephasePlan plan;
    plan.pulse = schedule.rephase;
    plan.t_r = schedule.t_r;
    plan.p_value = f.p_value;
    plan.theta = f.theta;
    const double ref = std::max(schedule.write.total_area(),
                                schedule.rephase.total_area());
    plan.mode = std::abs(f.p_value) <= 1e-9 * std::max(ref, 1.0)
                    ? RephasePlan::Mode::FullRecovery
                    : RephasePlan::Mode::EchoPreparation;
    return plan;
}

StoredState apply_rephase(const StoredState& s, const RephasePlan& plan,
                          const EnsembleGrid& e, const RamanMap& m)
{
    if (s.stage != Stage::PostDark)
        throw WrongStage("apply_rephase: state must be post-dark", "rephase");
    if (s.n_nodes != e.count())
        throw ScheduleInvalid("apply_rephase: state/ensemble node count mismatch");

    const double pr = plan.pulse.total_area();
    StoredState out = s;
    const std::size_t nz = s.depths.size();
    for (std::size_t k = 0; k < s.n_nodes; ++k) {
        const double phase =
            m.delta21 * plan.t_r + pr / (m.delta1 + e.nodes[k]);
        const cplx f = std::exp(kI * phase);
        for (std::size_t j = 0; j < nz; ++j)
            out.at(k, j) = s.at(k, j) * f;
    }
    out.t_ref = s.t_ref + plan.t_r;
    out.stark_area = s.stark_area - pr;
    out.stage = Stage::PostRephase;
    return out;
}

double solve_rephase_duration(const PulseShape& write_pulse, double omega_r_amplitude,
                              std::optional<double> echo_delay)
{
    if (!(omega_r_amplitude > 0.0))
        throw NoRootInBracket("solve_rephase_duration: rephasing amplitude must be > 0");
    const double w1 = write_pulse.total_area();
    double target = w1;
    if (echo_delay) {
        if (!(*echo_delay >= 0.0))
            throw NoRootInBracket("solve_rephase_duration: echo delay must be >= 0");
        target += write_pulse.amplitude * write_pulse.amplitude * (*echo_delay);
    }
    if (!(target > 0.0))
        throw NoRootInBracket("solve_rephase_duration: zero target area");

    const double a_r = omega_r_amplitude * omega_r_amplitude;
    const double edge = write_pulse.edge;
    auto area_of = [&](double duration) {
        // effective-window rect pulse of the given duration, placed at 0
        if (duration <= edge)
            return a_r * duration; // below the constructible window; linear anyway
        const PulseShape p = PulseShape::rect_smoothed(0.0, duration, omega_r_amplitude,
                                                       edge);
        return p.total_area();
    };

    double lo = 0.0, hi = std::max(4.0 * target / a_r, 4.0 * edge);
    if (area_of(hi) < target)
        throw NoRootInBracket("solve_rephase_duration: bracket does not contain the root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (area_of(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-10 * std::max(1.0, hi))
            break;
    }
    return 0.5 * (lo + hi);
}

double optical_variant_scaling(double omega_r, double delta1)
{
    if (delta1 == 0.0)
        throw PoleHit("optical_variant_scaling: Delta_1 must be nonzero");
    const double r = omega_r / delta1;
    return r * r;
}

} // namespace ramanecho
