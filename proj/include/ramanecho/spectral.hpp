#ifndef RAMANECHO_SPECTRAL_HPP
#define RAMANECHO_SPECTRAL_HPP

#include "ramanecho/ensemble.hpp"
#include "ramanecho/grids.hpp"
#include "ramanecho/pulses.hpp"

#include <vector>

namespace ramanecho {

// Physical constants of one run (normalized units: G width = 1, L = 1).
struct ProtocolParams {
    double beta = 24.0;        // coupling density [1/length]
    double g = 1.0;            // photon-atom coupling
    double gamma = 1e-5;       // regularization of the absorption kernel
    double length = 1.0;       // medium length
    double delta1 = 20.0;      // control detuning, write
    double delta2 = 20.0;      // control detuning, read (must equal delta1)
    double delta21 = 1.8;      // two-photon offset
    double kappa_slope = 0.0;  // phase-matching slope d(deltak)/domega
    double omega_ref = 0.0;    // expansion center omega' (default: line peak)

    void validate() const; // throws ValidationError
};

// omega_o = Delta_21 - |Omega_1|^2/Delta_1, the absorption-line peak.
double omega_peak(const ProtocolParams& p, double omega1);

enum class Stage { PostWrite, PostDark, PostRephase };

// Per-node, per-depth ground-state coherence with the bookkeeping needed to
// continue the protocol analytically: `t_ref` is the global time the values
// refer to and `stark_area` the signed accumulated control intensity area
// (write counts +, rephasing counts -), so the node phases beyond the
// imprinted spectrum are
//   Delta_21 * t_ref - stark_area / (Delta_1 + Delta_k).
struct StoredState {
    Stage stage = Stage::PostWrite;
    double t_ref = 0.0;
    double stark_area = 0.0;
    std::vector<double> depths;
    std::size_t n_nodes = 0;
    std::vector<cplx> values; // [k * depths.size() + j]

    cplx& at(std::size_t k, std::size_t j) { return values[k * depths.size() + j]; }
    const cplx& at(std::size_t k, std::size_t j) const
    {
        return values[k * depths.size() + j];
    }
};

// Cached per-run spectral machinery: chi, the absorption kernel on the
// frequency grid, and the mapped two-photon band.
struct SpectralContext {
    EnsembleGrid ensemble;
    ProtocolParams params;
    double omega1 = 0.0; // flat-top write/read control amplitude
    TimeGrid tgrid;
    FrequencyGrid fgrid;
    cplx chi_value{};
    std::vector<cplx> b1_bins; // susceptibility kernel per frequency bin
    double band_lo = 0.0, band_hi = 0.0;

    RamanMap map() const { return RamanMap{params.delta1, params.delta21, omega1}; }
    cplx lambda(std::size_t bin) const; // (beta/2)(i chi - B1)
    cplx lambda_of(cplx b1) const;
    bool in_band(double omega) const { return omega >= band_lo && omega <= band_hi; }
};

SpectralContext make_spectral_context(const EnsembleGrid& e, const ProtocolParams& p,
                                      double omega1, const TimeGrid& grid);

// Absorption kernel B1(omega): quadrature of
// G(Delta) J(Delta) / (gamma + i(omega - deltaomega_1(Delta))) / g
// over the ensemble support, J = |Omega_1|^2/(Delta_1+Delta)^2 the exact
// Jacobian of the two-photon map. Re B1 >= 0.
cplx susceptibility_kernel(double omega, const EnsembleGrid& e,
                           const ProtocolParams& p, double omega1);

// beta * L * Re B1(omega)
double optical_depth(double omega, const SpectralContext& ctx);

// A~(omega, z) = exp((beta/2)(i chi - B1) z) A~(omega, 0)
Spectrum storage_transform(const Spectrum& in, double z, const SpectralContext& ctx);

// Coherence written by the absorbed input: node k at depth z holds the input
// spectrum at its own shifted frequency, with the write-stage phase clock.
StoredState stored_coherence(const Spectrum& in, const SpectralContext& ctx,
                             const PulseShape& write_pulse, double t_a,
                             const std::vector<double>& depths);

// Control-free storage: a single global phase, relative node phases frozen.
StoredState dark_phase(const StoredState& s, double from, double to,
                       const ProtocolParams& p);

// Echo timing bundle: the echo center trails the input by
// stark_delay + read_launch (dispersion correction aside).
struct EchoTimings {
    double stark_delay = 0.0; // residual rephasing overshoot / |Omega_1|^2
    double read_launch = 0.0; // effective start of the read control
};

EchoTimings echo_timings(const StoredState& post_rephase, const PulseShape& read_pulse,
                         double omega1);

// Backward-retrieval echo spectrum from the depth quadrature of the coherence
// source against the integrating factor (finite optical depth).
Spectrum echo_spectrum_finite_depth(const Spectrum& in, const StoredState& post_rephase,
                                    const SpectralContext& ctx,
                                    const PulseShape& read_pulse);

// Large-depth limit of the transfer; requires d(omega_o) >= 10.
Spectrum echo_spectrum_asymptotic(const Spectrum& in, const SpectralContext& ctx,
                                  const EchoTimings& timings);

FieldEnvelope echo_time_trace(const Spectrum& echo);

// Dispersion correction: the echo arrives at stark_delay + read_launch -
// dispersion_delay. Central-difference derivative of B1, one bin step.
double dispersion_delay(const SpectralContext& ctx);

// kappa_slope that cancels dispersion_delay.
double kappa_slope_for_zero_delay(const EnsembleGrid& e, const ProtocolParams& p,
                                  double omega1, double bin_step);

// Phase-matching profile installed on the stored coherence for backward
// retrieval: deltak(omega) = -beta Re(chi) + kappa_slope (omega - omega_ref).
double phase_matching(double omega, const SpectralContext& ctx);

} // namespace ramanecho

#endif
