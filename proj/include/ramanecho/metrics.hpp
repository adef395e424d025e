#ifndef RAMANECHO_METRICS_HPP
#define RAMANECHO_METRICS_HPP

#include "ramanecho/grids.hpp"

namespace ramanecho {

// Observables of one retrieval run.
struct EchoReport {
    double efficiency = 0.0;     // E_echo / E_in
    double fidelity = 0.0;       // amplitude overlap at the correlation peak
    double delay = 0.0;          // extracted echo delay [time units]
    double phase = 0.0;          // arg of the correlation peak [rad]
    double reversal_score = 0.0; // +1 same-order replica, -1 time-reversed
    double theta_reported = 0.0; // constant rephasing phase, reported only
    double dtau_predicted = 0.0; // dispersion correction to the delay
};

double efficiency(const FieldEnvelope& in, const FieldEnvelope& echo);

struct FidelityDelay {
    double fidelity = 0.0;
    double delay = 0.0;
    double phase = 0.0;
};

// Cross-correlation delay estimate with 3-point quadratic refinement of the
// peak (sub-bin), amplitude-overlap fidelity, and the peak phase.
FidelityDelay fidelity_and_delay(const FieldEnvelope& in, const FieldEnvelope& echo);

// (F_same - F_reversed) / (F_same + F_reversed) against delayed and
// delayed-time-reversed copies of the input. Meaningful for asymmetric inputs.
double reversal_score(const FieldEnvelope& in, const FieldEnvelope& echo,
                      double delay_hint = 0.0);

} // namespace ramanecho

#endif
