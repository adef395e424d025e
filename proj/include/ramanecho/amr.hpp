#ifndef RAMANECHO_AMR_HPP
#define RAMANECHO_AMR_HPP

#include "ramanecho/ensemble.hpp"
#include "ramanecho/pulses.hpp"
#include "ramanecho/spectral.hpp"

#include <optional>

namespace ramanecho {

// Rephasing bookkeeping: the intensity-area functional
//   P = int |Omega_R|^2 - int |Omega_1|^2
// balances the Stark phase accrued under the write control against the
// opposite-signed phase accrued under the rephasing control. P = 0 restores
// the as-written coherence pattern; P = |Omega_1|^2 * T adds a controlled
// overshoot that the read control burns through in time T before emission.
struct RephasePlan {
    enum class Mode { FullRecovery, EchoPreparation };

    PulseShape pulse;      // Omega_R
    double t_r = 0.0;      // rephasing-stage duration
    double p_value = 0.0;  // P(S,R)
    double theta = 0.0;    // constant phase, reported only
    Mode mode = Mode::FullRecovery;
};

struct PhaseFunctional {
    double p_value = 0.0;
    double theta = 0.0;
};

// P and theta from the schedule's exact pulse areas; theta integrates the
// node-independent shifts over [0, T_s + T_R].
PhaseFunctional phase_functional(const ControlSchedule& schedule, double delta1,
                                 double delta21);

RephasePlan make_rephase_plan(const ControlSchedule& schedule, double delta1,
                              double delta21);

// Pure phase evolution under the rephasing pulse; advances the state clock by
// the stage duration and cancels stark_area by the pulse area.
StoredState apply_rephase(const StoredState& s, const RephasePlan& plan,
                          const EnsembleGrid& e, const RamanMap& m);

// Duration of a rect-smoothed rephasing pulse (amplitude omega_r_amplitude)
// that yields P = 0, or P = |Omega_1|^2 * echo_delay when echo_delay is set.
// Bisection to 1e-10 relative.
double solve_rephase_duration(const PulseShape& write_pulse, double omega_r_amplitude,
                              std::optional<double> echo_delay = std::nullopt);

// f_R = (Omega_R / Delta_1)^2: rate scaling of the rephasing mechanism when
// it is applied to an optical-transition coherence under far-detuned dressing.
double optical_variant_scaling(double omega_r, double delta1);

} // namespace ramanecho

#endif
