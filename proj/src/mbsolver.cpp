#include "ramanecho/mbsolver.hpp"

#include "ramanecho/errors.hpp"
#include "ramanecho/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ramanecho {

namespace {
const cplx kI{0.0, 1.0};
constexpr std::size_t kNodeBlock = 16;

// Precomputed control sampling and per-node/per-step exact phase factors for
// one protocol stage on one time window. The factors are shared by every
// depth sweep of the stage.
struct StageKernel {
    std::size_t i0 = 0; // window start index on the master grid
    std::size_t nw = 0; // samples in the window
    double dt = 0.0;
    std::vector<double> inten; // |Omega|^2 at window samples
    std::vector<cplx> phases;  // [k*(nw-1)+n] exp(i(delta21 dt - darea/(d1+delta)))
    std::vector<double> invd;  // 1/(delta1 + delta_k)
    std::vector<double> wtil;  // w_k * invd_k / g
    double halfbeta = 0.0;
    cplx chi_val{};
};

StageKernel make_kernel(const TimeGrid& g, std::size_t i0, std::size_t i1,
                        const PulseShape& pulse, const EnsembleGrid& e,
                        const ProtocolParams& p)
{
    StageKernel K;
    K.i0 = i0;
    K.nw = i1 - i0;
    K.dt = g.dt;
    K.halfbeta = 0.5 * p.beta;
    K.chi_val = chi(e, p.delta1);

    const std::size_t m = e.count();
    K.invd.resize(m);
    K.wtil.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        K.invd[k] = 1.0 / (p.delta1 + e.nodes[k]);
        K.wtil[k] = e.weights[k] * K.invd[k] / p.g;
    }

    K.inten.resize(K.nw);
    std::vector<double> darea(K.nw > 0 ? K.nw - 1 : 0);
    for (std::size_t n = 0; n < K.nw; ++n)
        K.inten[n] = pulse.intensity(g.time(i0 + n));
    for (std::size_t n = 0; n + 1 < K.nw; ++n)
        darea[n] = pulse.intensity_area(g.time(i0 + n), g.time(i0 + n + 1));

    K.phases.resize(m * darea.size());
    parallel_for_blocks(m, kNodeBlock, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            cplx* ph = K.phases.data() + k * darea.size();
            for (std::size_t n = 0; n < darea.size(); ++n) {
                const double a = p.delta21 * g.dt - darea[n] * K.invd[k];
                ph[n] = cplx(std::cos(a), std::sin(a));
            }
        }
    });
    return K;
}

// Scratch buffers reused across depth sweeps.
struct Workspace {
    std::vector<cplx> partials; // [block][nw]
    std::vector<cplx> source;
    std::vector<cplx> r_out;
    std::vector<cplx> a_pred, rhs1, rhs2;
    double max_r = 0.0;
};

// One coherence sweep over the window: integrates every node ODE driven by
// the field A (exponential integrator with trapezoidal drive), accumulates
// the ensemble source S(t) = <R/(Delta_1+Delta)>/g with a fixed block-order
// reduction, and reports the per-node final coherences.
void sweep(const StageKernel& K, const cplx* a, const cplx* r_init, Workspace& ws)
{
    const std::size_t m = K.invd.size();
    const std::size_t nw = K.nw;
    const std::size_t nblocks = (m + kNodeBlock - 1) / kNodeBlock;
    ws.partials.assign(nblocks * nw, cplx{});
    ws.source.assign(nw, cplx{});
    ws.r_out.resize(m);

    const double half_dt = 0.5 * K.dt;
    parallel_for_blocks(m, kNodeBlock, [&](std::size_t lo, std::size_t hi) {
        cplx* part = ws.partials.data() + (lo / kNodeBlock) * nw;
        for (std::size_t k = lo; k < hi; ++k) {
            const cplx* ph = K.phases.data() + k * (nw - 1);
            const double cd = half_dt * K.invd[k];
            const double wt = K.wtil[k];
            cplx r = r_init ? r_init[k] : cplx{};
            for (std::size_t n = 0; n + 1 < nw; ++n) {
                part[n] += wt * r;
                // drive contribution i*(dt/2)*q*A at both step ends
                const double qa = cd * K.inten[n];
                const double qb = cd * K.inten[n + 1];
                const cplx da(-qa * a[n].imag(), qa * a[n].real());
                const cplx db(-qb * a[n + 1].imag(), qb * a[n + 1].real());
                r = ph[n] * (r + da) + db;
            }
            part[nw - 1] += wt * r;
            ws.r_out[k] = r;
        }
    });

    for (std::size_t b = 0; b < nblocks; ++b) {
        const cplx* part = ws.partials.data() + b * nw;
        for (std::size_t n = 0; n < nw; ++n)
            ws.source[n] += part[n];
    }
    double mx = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        mx = std::max(mx, std::norm(ws.r_out[k]));
    ws.max_r = std::sqrt(mx);
}

void fill_rhs(const StageKernel& K, const cplx* a, const std::vector<cplx>& source,
              std::vector<cplx>& rhs)
{
    rhs.resize(K.nw);
    for (std::size_t n = 0; n < K.nw; ++n)
        rhs[n] = kI * K.halfbeta * (K.chi_val * a[n] + source[n]);
}

void check_step(const TimeGrid& g, const EnsembleGrid& e, const ProtocolParams& p,
                double omega1)
{
    const RamanMap m{p.delta1, p.delta21, omega1};
    double mx = 0.0;
    for (double d : e.nodes)
        mx = std::max(mx, std::abs(two_photon_shift(d, m)));
    if (g.dt * mx >= 0.5)
        throw StepTooCoarse("dt * max|two-photon shift| must stay below 0.5");
}

std::size_t ceil_index(const TimeGrid& g, double t)
{
    const double x = (t - g.t0) / g.dt;
    long i = static_cast<long>(std::ceil(x - 1e-12));
    i = std::max(0L, std::min(static_cast<long>(g.n) - 1, i));
    return static_cast<std::size_t>(i);
}

std::size_t floor_index(const TimeGrid& g, double t)
{
    const double x = (t - g.t0) / g.dt;
    long i = static_cast<long>(std::floor(x + 1e-12));
    i = std::max(0L, std::min(static_cast<long>(g.n) - 1, i));
    return static_cast<std::size_t>(i);
}

// global control-free rotation of every coherence
void advance_free(MediumState& s, double to, const ProtocolParams& p)
{
    const cplx f = std::exp(kI * (p.delta21 * (to - s.t_ref)));
    for (cplx& v : s.r12)
        v *= f;
    for (cplx& v : s.r14)
        v *= f;
    s.t_ref = to;
}
} // namespace

DepthGrid::DepthGrid(std::size_t m) : m_slices(m)
{
    if (m < 32)
        throw ValidationError("DepthGrid: need at least 32 slices");
}

WriteResult integrate_write(const FieldEnvelope& a1_in, const ControlSchedule& schedule,
                            const EnsembleGrid& e, const ProtocolParams& p,
                            const DepthGrid& grids)
{
    p.validate();
    const TimeGrid& g = a1_in.grid;
    const PulseShape& pulse = schedule.write;
    check_step(g, e, p, pulse.amplitude);

    const double t_end = std::max(schedule.t_a, pulse.support_end());
    const std::size_t i1 = ceil_index(g, t_end) + 1;
    StageKernel K = make_kernel(g, 0, i1, pulse, e, p);

    // weak-field ceiling from the input spectral peak
    const Spectrum in_spec = forward_transform(a1_in);
    double amax = 0.0;
    for (const cplx& v : in_spec.samples)
        amax = std::max(amax, std::abs(v));
    double qmax = 0.0;
    for (double inv : K.invd)
        qmax = std::max(qmax, std::abs(inv));
    const double ceiling =
        10.0 * pulse.amplitude * pulse.amplitude * qmax * std::max(amax, 1e-300);

    const std::size_t m_edges = grids.edges();
    const double dz = grids.dz(p.length);

    WriteResult out;
    out.state.stage = Stage::PostWrite;
    out.state.grid = g;
    out.state.n_nodes = e.count();
    out.state.depths.resize(m_edges);
    for (std::size_t j = 0; j < m_edges; ++j)
        out.state.depths[j] = dz * static_cast<double>(j);
    out.state.r12.assign(e.count() * m_edges, cplx{});

    Workspace ws;
    std::vector<cplx> a(a1_in.samples.begin(), a1_in.samples.begin() + i1);

    for (std::size_t j = 0; j + 1 < m_edges; ++j) {
        sweep(K, a.data(), nullptr, ws);
        if (ws.max_r > ceiling)
            throw UnstableGrowth("coherence exceeded the weak-field ceiling", "write");
        for (std::size_t k = 0; k < e.count(); ++k)
            out.state.r12[k * m_edges + j] = ws.r_out[k];
        fill_rhs(K, a.data(), ws.source, ws.rhs1);

        ws.a_pred.resize(K.nw);
        for (std::size_t n = 0; n < K.nw; ++n)
            ws.a_pred[n] = a[n] + dz * ws.rhs1[n];
        sweep(K, ws.a_pred.data(), nullptr, ws);
        fill_rhs(K, ws.a_pred.data(), ws.source, ws.rhs2);

        for (std::size_t n = 0; n < K.nw; ++n)
            a[n] += 0.5 * dz * (ws.rhs1[n] + ws.rhs2[n]);
    }
    sweep(K, a.data(), nullptr, ws);
    for (std::size_t k = 0; k < e.count(); ++k)
        out.state.r12[k * m_edges + (m_edges - 1)] = ws.r_out[k];

    out.state.t_ref = g.time(i1 - 1);
    out.transmitted = FieldEnvelope(g);
    std::copy(a.begin(), a.end(), out.transmitted.samples.begin());
    return out;
}

MediumState integrate_dark(const MediumState& state, double from, double to,
                           const ProtocolParams& p)
{
    if (state.stage != Stage::PostWrite)
        throw WrongStage("integrate_dark: state must be post-write", "dark");
    if (!(from < to))
        throw InvalidWindow("integrate_dark: 'from' must precede 'to'");
    MediumState out = state;
    out.t_ref = from;
    advance_free(out, to, p);
    out.stage = Stage::PostDark;
    return out;
}

MediumState integrate_rephase(const MediumState& state, const RephasePlan& plan,
                              const EnsembleGrid& e, const ProtocolParams& p)
{
    if (state.stage != Stage::PostDark)
        throw WrongStage("integrate_rephase: state must be post-dark", "rephase");
    MediumState out = state;

    const double t0 = state.t_ref;
    const double t1 = state.t_ref + plan.t_r;
    const std::size_t steps = 512;
    const double h = (t1 - t0) / static_cast<double>(steps);

    std::vector<double> darea(steps);
    for (std::size_t s = 0; s < steps; ++s)
        darea[s] = plan.pulse.intensity_area(t0 + h * s, t0 + h * (s + 1));

    std::vector<cplx>& target = out.pattern_on_r14 ? out.r14 : out.r12;
    const std::size_t nz = state.depths.size();
    for (std::size_t k = 0; k < e.count(); ++k) {
        const double invd = 1.0 / (p.delta1 + e.nodes[k]);
        double phase = 0.0;
        for (std::size_t s = 0; s < steps; ++s)
            phase += p.delta21 * h + darea[s] * invd;
        const cplx f = std::exp(kI * phase);
        for (std::size_t j = 0; j < nz; ++j)
            target[k * nz + j] *= f;
    }
    out.t_ref = t1;
    out.stage = Stage::PostRephase;
    return out;
}

FieldEnvelope integrate_read(const MediumState& state, const ControlSchedule& schedule,
                             const EnsembleGrid& e, const ProtocolParams& p,
                             const DepthGrid& grids)
{
    if (state.stage != Stage::PostRephase)
        throw WrongStage("integrate_read: state must be post-rephase", "read");
    if (state.pattern_on_r14)
        throw WrongStage("integrate_read: pattern still parked on R14", "read");
    if (std::abs(schedule.read.amplitude - schedule.write.amplitude) >
        1e-12 * std::max(1.0, schedule.write.amplitude))
        throw ScheduleInvalid("read control amplitude must equal the write amplitude");

    const TimeGrid& g = state.grid;
    const PulseShape& pulse = schedule.read;
    check_step(g, e, p, pulse.amplitude);

    const std::size_t m_edges = grids.edges();
    if (state.depths.size() != m_edges)
        throw ValidationError("integrate_read: depth grid mismatch");

    const std::size_t i0 = floor_index(g, pulse.support_begin() - 2.0 * g.dt);
    const std::size_t i1 = g.n;
    StageKernel K = make_kernel(g, i0, i1, pulse, e, p);

    // advance the stored pattern to the window start and install the
    // phase-matching profile deltak(deltaomega_1(Delta_k)) * z
    MediumState s = state;
    advance_free(s, g.time(i0), p);
    const RamanMap map{p.delta1, p.delta21, schedule.write.amplitude};
    const cplx chi_val = chi(e, p.delta1);
    const std::size_t nz = s.depths.size();
    std::vector<cplx> r0(s.r12.size());
    for (std::size_t k = 0; k < e.count(); ++k) {
        const double dk = -p.beta * chi_val.real() +
                          p.kappa_slope *
                              (two_photon_shift(e.nodes[k], map) - p.omega_ref);
        for (std::size_t j = 0; j < nz; ++j)
            r0[k * nz + j] = s.r12[k * nz + j] * std::exp(kI * (dk * s.depths[j]));
    }

    Workspace ws;
    const double dz = grids.dz(p.length);
    std::vector<cplx> a(K.nw, cplx{});
    std::vector<cplx> r_slice(e.count()), r_slice2(e.count());

    for (std::size_t j = m_edges - 1; j > 0; --j) {
        for (std::size_t k = 0; k < e.count(); ++k)
            r_slice[k] = r0[k * nz + j];
        sweep(K, a.data(), r_slice.data(), ws);
        fill_rhs(K, a.data(), ws.source, ws.rhs1);

        ws.a_pred.resize(K.nw);
        for (std::size_t n = 0; n < K.nw; ++n)
            ws.a_pred[n] = a[n] + dz * ws.rhs1[n];
        for (std::size_t k = 0; k < e.count(); ++k)
            r_slice2[k] = r0[k * nz + (j - 1)];
        sweep(K, ws.a_pred.data(), r_slice2.data(), ws);
        fill_rhs(K, ws.a_pred.data(), ws.source, ws.rhs2);

        for (std::size_t n = 0; n < K.nw; ++n)
            a[n] += 0.5 * dz * (ws.rhs1[n] + ws.rhs2[n]);
    }
    for (const cplx& v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw UnstableGrowth("echo field diverged", "read");

    FieldEnvelope echo(g);
    for (std::size_t n = 0; n < K.nw; ++n)
        echo.samples[i0 + n] = a[n];
    return echo;
}

FourLevelResult run_four_level(const FieldEnvelope& a1_in,
                               const ControlSchedule& schedule, const EnsembleGrid& e,
                               const ProtocolParams& p, const DepthGrid& grids,
                               std::optional<double> noise_injection)
{
    schedule.validate();
    const bool with_pi = schedule.pi_pulses.has_value();

    WriteResult wr = integrate_write(a1_in, schedule, e, p, grids);
    MediumState s = std::move(wr.state);
    s.four_level = true;
    s.r14.assign(s.r12.size(), cplx{});
    s.rho2.assign(s.depths.size(), 0.0);

    double t_pi1 = 0.0, t_pi2 = 0.0;
    if (with_pi) {
        t_pi1 = schedule.pi_pulses->first;
        t_pi2 = schedule.pi_pulses->second;
        if (!(t_pi1 > s.t_ref && t_pi1 <= schedule.t_s))
            throw ScheduleInvalid("four-level: first pi-pulse must precede T_s");
        if (!(t_pi2 > schedule.t_s + schedule.t_r &&
              t_pi2 < schedule.read.support_begin()))
            throw ScheduleInvalid(
                "four-level: second pi-pulse must follow the rephasing stage");
        advance_free(s, t_pi1, p);
        for (std::size_t i = 0; i < s.r12.size(); ++i) {
            s.r14[i] = -kI * s.r12[i];
            s.r12[i] = cplx{};
        }
        s.pattern_on_r14 = true;
    }

    advance_free(s, schedule.t_s, p);
    s.stage = Stage::PostDark;

    const RephasePlan plan = make_rephase_plan(schedule, p.delta1, p.delta21);
    s = integrate_rephase(s, plan, e, p);
    if (noise_injection && *noise_injection > 0.0)
        for (double& r : s.rho2)
            r += *noise_injection;

    if (with_pi) {
        advance_free(s, t_pi2, p);
        for (std::size_t i = 0; i < s.r12.size(); ++i) {
            s.r12[i] = kI * s.r14[i]; // inverse-phase pulse: pair = identity
            s.r14[i] = cplx{};
        }
        s.pattern_on_r14 = false;
        // the second pi-pulse parks the spurious population on level 4
        std::fill(s.rho2.begin(), s.rho2.end(), 0.0);
    }
    double rho2_at_read = 0.0;
    for (double r : s.rho2)
        rho2_at_read = std::max(rho2_at_read, r);

    FourLevelResult out;
    out.echo = integrate_read(s, schedule, e, p, grids);
    out.rho2_at_read = rho2_at_read;
    out.pi_pulses_applied = with_pi;
    return out;
}

} // namespace ramanecho
