#include "ramanecho/spectral.hpp"

#include "ramanecho/errors.hpp"
#include "ramanecho/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ramanecho {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
const cplx kI{0.0, 1.0};

struct GlRule {
    std::vector<double> x, w;
    explicit GlRule(std::size_t m) { gauss_legendre(m, x, w); }
};

const GlRule& rule20()
{
    static const GlRule r(20);
    return r;
}
const GlRule& rule32()
{
    static const GlRule r(32);
    return r;
}
const GlRule& rule64()
{
    static const GlRule r(64);
    return r;
}
const GlRule& rule96()
{
    static const GlRule r(96);
    return r;
}

// Panel boundaries for [a, b], log-graded towards the pole position nuc so
// that the 1/(omega - nu) structure is resolved down to the gamma scale.
std::vector<double> graded_breaks(double a, double b, double nuc, double scale0)
{
    std::vector<double> pts;
    pts.push_back(a);
    auto push = [&](double x) {
        if (x > pts.back() + 1e-300 && x < b)
            pts.push_back(x);
    };
    const double span = b - a;
    if (nuc <= a) {
        for (double d = std::max(scale0, a - nuc); nuc + d < b; d *= 6.0)
            push(nuc + d);
    } else if (nuc >= b) {
        std::vector<double> rev;
        for (double d = std::max(scale0, nuc - b); nuc - d > a; d *= 6.0)
            rev.push_back(nuc - d);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it)
            push(*it);
    } else {
        std::vector<double> rev;
        for (double d = scale0; nuc - d > a; d *= 6.0)
            rev.push_back(nuc - d);
        for (auto it = rev.rbegin(); it != rev.rend(); ++it)
            push(*it);
        push(nuc);
        for (double d = scale0; nuc + d < b; d *= 6.0)
            push(nuc + d);
    }
    (void)span;
    pts.push_back(b);
    return pts;
}

// int_{u1}^{u2} du / (gamma - i u)
cplx cauchy_core(double gamma, double u1, double u2)
{
    return kI * (std::log(cplx(gamma, -u2)) - std::log(cplx(gamma, -u1)));
}

// int_{u1}^{u2} u du / (gamma - i u)
cplx cauchy_core_lin(double gamma, double u1, double u2)
{
    return kI * (u2 - u1) + gamma * (std::log(cplx(gamma, -u2)) - std::log(cplx(gamma, -u1)));
}

struct KernelEval {
    const Distribution* dist;
    RamanMap map;
    double gamma, g;
    double nu_lo, nu_hi;

    double mapped_density(double nu) const
    {
        return dist->density(detuning_of_frequency(nu, map));
    }

    // one-panel quadrature of the twice-subtracted integrand
    cplx panel(double a, double b, double omega, double g0, double g1, double nuc,
               const GlRule& r) const
    {
        cplx acc{};
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const double nu = 0.5 * (a + b) + 0.5 * (b - a) * r.x[q];
            const double f = mapped_density(nu) - g0 - g1 * (nu - nuc);
            acc += r.w[q] * f / cplx(gamma, omega - nu);
        }
        return acc * (0.5 * (b - a));
    }

    cplx evaluate(double omega, const GlRule& r) const
    {
        // expansion point for the singularity subtraction
        const double span = nu_hi - nu_lo;
        const double nuc = std::clamp(omega, nu_lo, nu_hi);
        const double h = 1e-6 * span;
        const double lo = std::max(nu_lo, nuc - h), hi = std::min(nu_hi, nuc + h);
        const double g0 = mapped_density(nuc);
        const double g1 = hi > lo ? (mapped_density(hi) - mapped_density(lo)) / (hi - lo) : 0.0;

        const double scale0 = std::max(2.0 * gamma, 1e-9 * span);
        const std::vector<double> pts = graded_breaks(nu_lo, nu_hi, omega, scale0);
        cplx acc{};
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            acc += panel(pts[i], pts[i + 1], omega, g0, g1, nuc, r);

        const double u1 = nu_lo - omega, u2 = nu_hi - omega;
        const cplx c0 = cauchy_core(gamma, u1, u2);
        const cplx c1 = cauchy_core_lin(gamma, u1, u2);
        acc += g0 * c0 + g1 * (c1 + (omega - nuc) * c0);
        return acc / g;
    }
};
} // namespace

void ProtocolParams::validate() const
{
    if (!(gamma > 0.0) || gamma > 1e-4)
        throw ValidationError("params: gamma must lie in (0, 1e-4] (pure regularization)");
    if (std::abs(delta2 - delta1) > 1e-12 * std::max(1.0, std::abs(delta1)))
        throw ValidationError("params: retrieval requires delta2 = delta1");
    if (!(beta > 0.0))
        throw ValidationError("params: beta must be positive");
    if (!(g > 0.0))
        throw ValidationError("params: g must be positive");
    if (!(length > 0.0))
        throw ValidationError("params: length must be positive");
}

double omega_peak(const ProtocolParams& p, double omega1)
{
    return p.delta21 - omega1 * omega1 / p.delta1;
}

cplx SpectralContext::lambda_of(cplx b1) const
{
    return 0.5 * params.beta * (kI * chi_value - b1);
}

cplx SpectralContext::lambda(std::size_t bin) const { return lambda_of(b1_bins[bin]); }

cplx susceptibility_kernel(double omega, const EnsembleGrid& e, const ProtocolParams& p,
                           double omega1)
{
    const RamanMap m{p.delta1, p.delta21, omega1};
    KernelEval ev;
    ev.dist = &e.dist;
    ev.map = m;
    ev.gamma = p.gamma;
    ev.g = p.g;
    ev.nu_lo = two_photon_shift(e.dist.support_min, m);
    ev.nu_hi = two_photon_shift(e.dist.support_max, m);

    const cplx coarse = ev.evaluate(omega, rule20());
    const cplx fine = ev.evaluate(omega, rule32());
    const double scale =
        std::max(std::abs(fine), 0.01 * kPi * e.dist.density(e.dist.center) / p.g);
    if (std::abs(fine - coarse) > 1e-6 * scale)
        throw QuadratureNotConverged("susceptibility kernel quadrature did not converge",
                                     "storage");
    return fine;
}

SpectralContext make_spectral_context(const EnsembleGrid& e, const ProtocolParams& p,
                                      double omega1, const TimeGrid& grid)
{
    p.validate();
    SpectralContext ctx;
    ctx.ensemble = e;
    ctx.params = p;
    ctx.omega1 = omega1;
    ctx.tgrid = grid;
    ctx.fgrid = FrequencyGrid(grid);
    ctx.chi_value = chi(e, p.delta1);
    const RamanMap m = ctx.map();
    ctx.band_lo = two_photon_shift(e.dist.support_min, m);
    ctx.band_hi = two_photon_shift(e.dist.support_max, m);

    ctx.b1_bins.assign(grid.n, cplx{});
    parallel_for_blocks(grid.n, 256, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            ctx.b1_bins[k] = susceptibility_kernel(ctx.fgrid.omega(k), e, p, omega1);
    });
    return ctx;
}

double optical_depth(double omega, const SpectralContext& ctx)
{
    const cplx b1 =
        susceptibility_kernel(omega, ctx.ensemble, ctx.params, ctx.omega1);
    return ctx.params.beta * ctx.params.length * b1.real();
}

Spectrum storage_transform(const Spectrum& in, double z, const SpectralContext& ctx)
{
    if (z < 0.0 || z > ctx.params.length)
        throw ValidationError("storage_transform: depth outside the medium");
    Spectrum out = in;
    for (std::size_t k = 0; k < out.samples.size(); ++k)
        out.samples[k] *= std::exp(ctx.lambda(k) * z);
    return out;
}

StoredState stored_coherence(const Spectrum& in, const SpectralContext& ctx,
                             const PulseShape& write_pulse, double t_a,
                             const std::vector<double>& depths)
{
    if (write_pulse.kind != PulseShape::Kind::RectSmoothed)
        throw ScheduleInvalid("stored_coherence: write control must be rect-smoothed");
    if (t_a < write_pulse.t_off)
        throw ScheduleInvalid("stored_coherence: T_a precedes the write switch-off");

    // band-limit guard: <= 1% of input energy outside the mapped band
    double e_in = 0.0, e_out = 0.0;
    for (std::size_t k = 0; k < in.samples.size(); ++k) {
        const double w = std::norm(in.samples[k]);
        e_in += w;
        if (!ctx.in_band(in.grid.omega(k)))
            e_out += w;
    }
    if (e_in > 0.0 && e_out > 0.01 * e_in)
        throw BandwidthExceedsComb("input spectrum leaks outside the mapped Raman band",
                                   "write");

    const FieldEnvelope env = inverse_transform(in);
    const RamanMap m = ctx.map();
    const double a = write_pulse.amplitude * write_pulse.amplitude;
    // control intensity area on the virtual constant-from-t=0 clock
    const double area_bar =
        write_pulse.intensity_area(write_pulse.support_begin(), t_a) +
        a * write_pulse.t_on;

    StoredState s;
    s.stage = Stage::PostWrite;
    s.t_ref = t_a;
    s.stark_area = area_bar;
    s.depths = depths;
    s.n_nodes = ctx.ensemble.count();
    s.values.assign(s.n_nodes * depths.size(), cplx{});

    parallel_for_blocks(s.n_nodes, 16, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double delta = ctx.ensemble.nodes[k];
            const double dw = two_photon_shift(delta, m);
            const cplx amp = transform_at(env, dw);
            const cplx b1 =
                susceptibility_kernel(dw, ctx.ensemble, ctx.params, ctx.omega1);
            const cplx lam = ctx.lambda_of(b1);
            const double inv = 1.0 / (ctx.params.delta1 + delta);
            const double phase = ctx.params.delta21 * t_a - area_bar * inv;
            const cplx base = kI * (a * inv) * amp * std::exp(kI * phase);
            for (std::size_t j = 0; j < depths.size(); ++j)
                s.at(k, j) = base * std::exp(lam * depths[j]);
        }
    });
    return s;
}

StoredState dark_phase(const StoredState& s, double from, double to,
                       const ProtocolParams& p)
{
    if (!(from < to))
        throw InvalidWindow("dark_phase: 'from' must precede 'to'");
    StoredState out = s;
    const cplx f = std::exp(kI * (p.delta21 * (to - from)));
    for (cplx& v : out.values)
        v *= f;
    out.t_ref = to;
    out.stage = (s.stage == Stage::PostWrite) ? Stage::PostDark : s.stage;
    return out;
}

EchoTimings echo_timings(const StoredState& post_rephase, const PulseShape& read_pulse,
                         double omega1)
{
    if (post_rephase.stage != Stage::PostRephase)
        throw WrongStage("echo_timings: state must be post-rephase");
    EchoTimings t;
    t.stark_delay = -post_rephase.stark_area / (omega1 * omega1);
    t.read_launch = read_pulse.t_on;
    return t;
}

namespace {
cplx depth_quadrature(cplx mu, double length, const GlRule& r)
{
    // panel count follows the total phase/decay so each panel stays within
    // the rule's resolving power
    const std::size_t panels =
        1 + static_cast<std::size_t>(std::abs(mu) * length / 40.0);
    cplx acc{};
    for (std::size_t pnl = 0; pnl < panels; ++pnl) {
        const double a = length * static_cast<double>(pnl) / panels;
        const double b = length * static_cast<double>(pnl + 1) / panels;
        cplx part{};
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const double z = 0.5 * (a + b) + 0.5 * (b - a) * r.x[q];
            part += r.w[q] * std::exp(mu * z);
        }
        acc += part * (0.5 * (b - a));
    }
    return acc;
}
} // namespace

double phase_matching(double omega, const SpectralContext& ctx)
{
    return -ctx.params.beta * ctx.chi_value.real() +
           ctx.params.kappa_slope * (omega - ctx.params.omega_ref);
}

Spectrum echo_spectrum_finite_depth(const Spectrum& in, const StoredState& post_rephase,
                                    const SpectralContext& ctx,
                                    const PulseShape& read_pulse)
{
    if (post_rephase.stage != Stage::PostRephase)
        throw WrongStage("echo_spectrum_finite_depth: state must be post-rephase",
                         "read");
    if (std::abs(read_pulse.amplitude - ctx.omega1) >
        1e-12 * std::max(1.0, ctx.omega1))
        throw ValidationError("read control amplitude must equal the write amplitude");

    const EchoTimings tm = echo_timings(post_rephase, read_pulse, ctx.omega1);
    const double t_tot = tm.stark_delay + tm.read_launch;
    const RamanMap m = ctx.map();
    const ProtocolParams& p = ctx.params;

    Spectrum out = in;
    std::fill(out.samples.begin(), out.samples.end(), cplx{});
    const double pref = kPi * p.beta / p.g;
    double in_max = 0.0;
    for (const cplx& v : in.samples)
        in_max = std::max(in_max, std::abs(v));

    parallel_for_blocks(in.samples.size(), 256, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double om = in.grid.omega(k);
            if (!ctx.in_band(om) || std::abs(in.samples[k]) <= 1e-14 * in_max)
                continue;
            const double delta_star = detuning_of_frequency(om, m);
            const double gd = ctx.ensemble.dist.density(delta_star);
            if (gd == 0.0)
                continue;
            const cplx mu = 2.0 * ctx.lambda(k) + kI * phase_matching(om, ctx);
            const cplx q64 = depth_quadrature(mu, p.length, rule64());
            const cplx q96 = depth_quadrature(mu, p.length, rule96());
            if (std::abs(q64 - q96) > 1e-6 * std::max(std::abs(q96), 1e-3 * p.length))
                throw DepthQuadratureNotConverged(
                    "echo depth quadrature did not converge", "read");
            const cplx phase = std::exp(kI * ((p.delta21 - om) * t_tot));
            out.samples[k] = -pref * gd * phase * in.samples[k] * q96;
        }
    });
    return out;
}

Spectrum echo_spectrum_asymptotic(const Spectrum& in, const SpectralContext& ctx,
                                  const EchoTimings& timings)
{
    const ProtocolParams& p = ctx.params;
    const double d0 = optical_depth(omega_peak(p, ctx.omega1), ctx);
    if (d0 < 10.0)
        throw DepthTooLowForAsymptotic(
            "asymptotic echo requires optical depth >= 10 at the line peak", "read");

    const double t_tot = timings.stark_delay + timings.read_launch;
    const RamanMap m = ctx.map();
    Spectrum out = in;
    std::fill(out.samples.begin(), out.samples.end(), cplx{});
    const double pref = kPi / p.g;

    for (std::size_t k = 0; k < in.samples.size(); ++k) {
        const double om = in.grid.omega(k);
        if (!ctx.in_band(om) || in.samples[k] == cplx{})
            continue;
        const double delta_star = detuning_of_frequency(om, m);
        const double gd = ctx.ensemble.dist.density(delta_star);
        if (gd == 0.0)
            continue;
        const cplx den =
            ctx.b1_bins[k] - kI * (p.kappa_slope * (om - p.omega_ref) / p.beta);
        const cplx phase = std::exp(kI * ((p.delta21 - om) * t_tot));
        out.samples[k] = -pref * gd * phase * in.samples[k] / den;
    }
    return out;
}

FieldEnvelope echo_time_trace(const Spectrum& echo) { return inverse_transform(echo); }

double dispersion_delay(const SpectralContext& ctx)
{
    const ProtocolParams& p = ctx.params;
    const double h = ctx.fgrid.domega;
    const cplx bp = susceptibility_kernel(p.omega_ref + h, ctx.ensemble, p, ctx.omega1);
    const cplx bm = susceptibility_kernel(p.omega_ref - h, ctx.ensemble, p, ctx.omega1);
    const double im_slope = (bp.imag() - bm.imag()) / (2.0 * h);
    const double g0 =
        ctx.ensemble.dist.density(detuning_of_frequency(p.omega_ref, ctx.map()));
    return (p.g / kPi) * (p.kappa_slope / p.beta - im_slope) / g0;
}

double kappa_slope_for_zero_delay(const EnsembleGrid& e, const ProtocolParams& p,
                                  double omega1, double bin_step)
{
    const double om = p.omega_ref;
    const cplx bp = susceptibility_kernel(om + bin_step, e, p, omega1);
    const cplx bm = susceptibility_kernel(om - bin_step, e, p, omega1);
    return p.beta * (bp.imag() - bm.imag()) / (2.0 * bin_step);
}

} // namespace ramanecho
