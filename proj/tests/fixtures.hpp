#ifndef RAMANECHO_TEST_FIXTURES_HPP
#define RAMANECHO_TEST_FIXTURES_HPP

#include "ramanecho/amr.hpp"
#include "ramanecho/ensemble.hpp"
#include "ramanecho/grids.hpp"
#include "ramanecho/pulses.hpp"
#include "ramanecho/spectral.hpp"

#include <cmath>
#include <vector>

namespace ramanecho::testing {

// Knobs for one canonical protocol scenario. Defaults give a single
// band-limited pulse stored at optical depth 30 with an echo-preparation
// rephasing plan and a dispersion-nulled phase-matching slope.
struct ScenarioSpec {
    double depth = 30.0;
    std::size_t n = 4096;
    std::size_t nodes = 384;
    double sigma_t = 30.0;     // input pulse width
    bool two_pulse = false;    // add a second, wider and weaker pulse
    double pulse_gap = 150.0;  // two-pulse separation
    double dark = 10.0;        // dark-storage duration T_s - T_a
    double stark_delay = 80.0; // rephasing overshoot P/|Omega_1|^2; 0 = full recovery
    double edge = 3.0;         // control edge duration
    double omega1 = 6.0;
    double delta1 = 20.0;
    bool null_dispersion = true; // pick kappa_slope cancelling the dispersion delay
    double kappa_slope = 0.0;    // used when null_dispersion is false
    // extra *linear* slope detuning on top of the nulled value, expressed as
    // the dispersion delay it produces
    double dispersion_target = 0.0;
};

struct Scenario {
    TimeGrid grid;
    EnsembleGrid ensemble;
    ProtocolParams params;
    ControlSchedule schedule;
    FieldEnvelope input;
    SpectralContext ctx;
    double t_centroid = 0.0;      // input energy centroid
    double expected_delay = 0.0;  // stark_delay + read launch (dispersion aside)
};

inline Scenario make_scenario(const ScenarioSpec& s)
{
    Scenario sc;
    sc.ensemble = make_ensemble(Distribution::gaussian(), s.nodes);

    ProtocolParams p;
    p.delta1 = p.delta2 = s.delta1;
    p.delta21 = s.omega1 * s.omega1 / s.delta1; // puts the line peak at omega = 0
    p.omega_ref = 0.0;
    p.g = 1.0;
    p.gamma = 1e-5;
    p.length = 1.0;
    p.beta = 1.0; // placeholder until the kernel peak is known
    const cplx b1_peak = susceptibility_kernel(0.0, sc.ensemble, p, s.omega1);
    p.beta = s.depth / (p.length * b1_peak.real());

    // signal(s) inside the write flat top
    const double t_c1 = std::ceil(3.4 * s.sigma_t + s.edge + 2.0);
    const double t_c2 = s.two_pulse ? t_c1 + s.pulse_gap : t_c1;
    const double sigma2 = 1.4 * s.sigma_t;
    const double t_w_end =
        std::ceil((s.two_pulse ? t_c2 : t_c1) + 3.4 * (s.two_pulse ? sigma2 : s.sigma_t) +
                  2.0);
    PulseShape write = PulseShape::rect_smoothed(0.0, t_w_end, s.omega1, s.edge);
    // T_a marks the state once the write control is fully off, so the
    // analytic stage clock sees the complete pulse area
    const double t_a = std::ceil(write.support_end() + 1.0);
    const double t_s = t_a + s.dark;
    const double rdur = solve_rephase_duration(
        write, s.omega1,
        s.stark_delay > 0.0 ? std::optional<double>(s.stark_delay) : std::nullopt);
    const double slack = 0.625 * s.edge + 1.0;
    PulseShape rephase =
        PulseShape::rect_smoothed(t_s + slack, t_s + slack + rdur, s.omega1, s.edge);
    const double t_r = slack + rdur + 1.25 * s.edge + 1.0;

    const double read_on = t_s + t_r;
    const double echo_center = t_c2 + s.stark_delay + read_on;
    const double t_end =
        echo_center + 4.0 * (s.two_pulse ? sigma2 : s.sigma_t) + 4.0 * s.edge + 10.0;
    const double t0 = -std::ceil(5.2 * s.sigma_t - t_c1 + 5.0);

    double dt = (t_end - t0) / static_cast<double>(s.n);
    dt = std::ceil(dt * 256.0) / 256.0;
    sc.grid = TimeGrid(t0, dt, s.n);

    PulseShape read = PulseShape::rect_smoothed(
        read_on, sc.grid.t0 + sc.grid.span() - 0.625 * s.edge - dt, s.omega1, s.edge);

    sc.schedule.write = write;
    sc.schedule.rephase = rephase;
    sc.schedule.read = read;
    sc.schedule.t_a = t_a;
    sc.schedule.t_s = t_s;
    sc.schedule.t_r = t_r;
    sc.schedule.validate();

    sc.input = make_gaussian_pulse(t_c1, s.sigma_t, cplx{1.0, 0.0}, sc.grid);
    if (s.two_pulse) {
        FieldEnvelope second =
            make_gaussian_pulse(t_c2, sigma2, cplx{0.55, 0.0}, sc.grid);
        for (std::size_t j = 0; j < sc.grid.n; ++j)
            sc.input.samples[j] += second.samples[j];
    }
    double esum = 0.0, tsum = 0.0;
    for (std::size_t j = 0; j < sc.grid.n; ++j) {
        const double w = std::norm(sc.input.samples[j]);
        esum += w;
        tsum += w * sc.grid.time(j);
    }
    sc.t_centroid = tsum / esum;

    if (s.null_dispersion) {
        p.kappa_slope = kappa_slope_for_zero_delay(sc.ensemble, p, s.omega1,
                                                   FrequencyGrid(sc.grid).domega);
        if (s.dispersion_target != 0.0) {
            const double g0 = sc.ensemble.dist.density(0.0);
            p.kappa_slope +=
                s.dispersion_target * 3.14159265358979323846 * g0 * p.beta / p.g;
        }
    } else {
        p.kappa_slope = s.kappa_slope;
    }

    sc.params = p;
    sc.ctx = make_spectral_context(sc.ensemble, p, s.omega1, sc.grid);
    sc.expected_delay = s.stark_delay + read_on;
    return sc;
}

// Full analytic (frequency-domain) protocol: write -> dark -> rephase -> read.
struct SpectralRun {
    Spectrum input_spectrum;
    StoredState post_write;
    StoredState post_dark;
    StoredState post_rephase;
    Spectrum echo_spectrum;
    FieldEnvelope echo;
};

inline SpectralRun run_spectral(const Scenario& sc,
                                const std::vector<double>& depths = {0.0, 0.25, 0.5,
                                                                     0.75, 1.0})
{
    SpectralRun r;
    r.input_spectrum = forward_transform(sc.input);
    r.post_write = stored_coherence(r.input_spectrum, sc.ctx, sc.schedule.write,
                                    sc.schedule.t_a, depths);
    r.post_dark = dark_phase(r.post_write, sc.schedule.t_a, sc.schedule.t_s, sc.params);
    const RephasePlan plan =
        make_rephase_plan(sc.schedule, sc.params.delta1, sc.params.delta21);
    r.post_rephase = apply_rephase(r.post_dark, plan, sc.ensemble, sc.ctx.map());
    r.echo_spectrum =
        echo_spectrum_finite_depth(r.input_spectrum, r.post_rephase, sc.ctx,
                                   sc.schedule.read);
    r.echo = echo_time_trace(r.echo_spectrum);
    return r;
}

inline double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

} // namespace ramanecho::testing

#endif
